#ifndef KGLAB_H
#define KGLAB_H

#include <stddef.h>
#include <stdint.h>

/*
 Result code of every fallible call.
 */
typedef enum KglStatus {
  KGL_STATUS_OK = 0,
  KGL_STATUS_NULL_ARGUMENT = 1,
  KGL_STATUS_INVALID_UTF8 = 2,
  KGL_STATUS_PARSE_ERROR = 3,
  KGL_STATUS_INVALID_ARGUMENT = 4,
  KGL_STATUS_EMPTY_INPUT = 5,
  KGL_STATUS_UNKNOWN_TOKEN = 6,
  KGL_STATUS_IO = 7,
  KGL_STATUS_INTERNAL = 8,
} KglStatus;

typedef struct KglCorpus KglCorpus;

typedef struct KglEmbedding KglEmbedding;

typedef struct KglGraph KglGraph;

typedef struct KglMaterializeSummary {
  uintptr_t iterations;
  uintptr_t added_subproperty;
  uintptr_t added_inverse;
  uintptr_t added_transitive;
  uintptr_t added_symmetric;
  uintptr_t added_total;
  uintptr_t total_before;
  uintptr_t total_after;
} KglMaterializeSummary;

typedef struct KglWalkConfig {
  uintptr_t walks_per_node;
  uintptr_t depth;
  uint64_t seed;
} KglWalkConfig;

typedef struct KglTrainConfig {
  uintptr_t dim;
  uintptr_t window;
  uintptr_t epochs;
  uintptr_t negatives;
  double initial_lr;
  double min_lr;
  uint64_t seed;
  /*
   Non-zero for single-threaded, reproducible training.
   */
  int32_t deterministic;
} KglTrainConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer is
 valid until the next failing call on the same thread.
 */
const char *kgl_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *kgl_version(void);

/*
 # Safety
 `s` must come from this library and not have been freed.
 */
void kgl_string_free(char *s);

/*
 Parses N-Triples text into a new graph with an empty T-box.

 # Safety
 `text` must be a NUL-terminated string; `out` must be writable.
 */
enum KglStatus kgl_graph_parse(const char *text, struct KglGraph **out);

/*
 Adds the axioms in `text` to the graph's T-box.

 # Safety
 `graph` must be a live handle; `text` a NUL-terminated string.
 */
enum KglStatus kgl_graph_load_tbox(struct KglGraph *graph, const char *text);

/*
 Materializes the graph in place under its T-box. `summary` may be NULL.

 # Safety
 `graph` must be a live handle; `summary` NULL or writable.
 */
enum KglStatus kgl_graph_materialize(struct KglGraph *graph, struct KglMaterializeSummary *summary);

/*
 # Safety
 `graph` must be NULL or a live handle.
 */
uintptr_t kgl_graph_entity_count(const struct KglGraph *graph);

/*
 # Safety
 `graph` must be NULL or a live handle.
 */
uintptr_t kgl_graph_predicate_count(const struct KglGraph *graph);

/*
 Resource triples only; literal-valued triples are not counted.

 # Safety
 `graph` must be NULL or a live handle.
 */
uintptr_t kgl_graph_triple_count(const struct KglGraph *graph);

/*
 Serializes the graph as N-Triples into a new string (free with
 `kgl_string_free`).

 # Safety
 `graph` must be a live handle; `out` writable.
 */
enum KglStatus kgl_graph_serialize(const struct KglGraph *graph, char **out);

/*
 # Safety
 `graph` must be NULL or a handle not yet freed.
 */
void kgl_graph_free(struct KglGraph *graph);

/*
 Generates random walks over the graph.

 # Safety
 `graph` must be a live handle; `out` writable.
 */
enum KglStatus kgl_walks_generate(const struct KglGraph *graph,
                                  struct KglWalkConfig config,
                                  struct KglCorpus **out);

/*
 # Safety
 `corpus` must be NULL or a live handle.
 */
uintptr_t kgl_corpus_len(const struct KglCorpus *corpus);

/*
 Corpus file text (header line plus one walk per line) as a new string.

 # Safety
 `corpus` must be a live handle; `out` writable.
 */
enum KglStatus kgl_corpus_text(const struct KglCorpus *corpus, char **out);

/*
 # Safety
 `corpus` must be NULL or a handle not yet freed.
 */
void kgl_corpus_free(struct KglCorpus *corpus);

/*
 Default training parameters.
 */
struct KglTrainConfig kgl_train_config_default(void);

/*
 Trains skip-gram embeddings on a corpus.

 # Safety
 `corpus` must be a live handle; `config` readable; `out` writable.
 */
enum KglStatus kgl_train(const struct KglCorpus *corpus,
                         const struct KglTrainConfig *config,
                         struct KglEmbedding **out);

/*
 Parses embedding-file text (`<count> <dim>` header, then one token and
 its values per line).

 # Safety
 `text` must be a NUL-terminated string; `out` writable.
 */
enum KglStatus kgl_embedding_load(const char *text, struct KglEmbedding **out);

/*
 Embedding-file text as a new string.

 # Safety
 `embedding` must be a live handle; `out` writable.
 */
enum KglStatus kgl_embedding_text(const struct KglEmbedding *embedding, char **out);

/*
 # Safety
 `embedding` must be NULL or a live handle.
 */
uintptr_t kgl_embedding_dim(const struct KglEmbedding *embedding);

/*
 # Safety
 `embedding` must be NULL or a live handle.
 */
uintptr_t kgl_embedding_len(const struct KglEmbedding *embedding);

/*
 Cosine similarity of two tokens.

 # Safety
 `embedding` must be a live handle; `a`, `b` NUL-terminated; `out` writable.
 */
enum KglStatus kgl_embedding_cosine(const struct KglEmbedding *embedding,
                                    const char *a,
                                    const char *b,
                                    double *out);

/*
 Copies a token's vector into `buf`, which must hold at least `dim` values.

 # Safety
 `embedding` must be a live handle; `token` NUL-terminated; `buf` must
 point to `buf_len` writable doubles.
 */
enum KglStatus kgl_embedding_vector(const struct KglEmbedding *embedding,
                                    const char *token,
                                    double *buf,
                                    uintptr_t buf_len);

/*
 # Safety
 `embedding` must be NULL or a handle not yet freed.
 */
void kgl_embedding_free(struct KglEmbedding *embedding);

/*
 Spearman rank correlation (average ranks for ties) of two arrays of
 length `n`.

 # Safety
 `x` and `y` must point to `n` readable doubles; `out` writable.
 */
enum KglStatus kgl_spearman(const double *x, const double *y, uintptr_t n, double *out);

/*
 `2 r ρ / (r + ρ)`, or 0 when the inputs have mixed signs or `r + ρ <= 0`.
 */
double kgl_harmonic_mean(double pearson, double spearman);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KGLAB_H */
