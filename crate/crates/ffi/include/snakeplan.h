#ifndef SNAKEPLAN_H
#define SNAKEPLAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; the first five match the CLI exit codes.
typedef enum SnakeStatus {
  // Success, or a Yes answer.
  SNAKE_STATUS_OK = 0,
  // A No answer, or a route that fails verification.
  SNAKE_STATUS_NO = 1,
  SNAKE_STATUS_PARSE_ERROR = 2,
  SNAKE_STATUS_BUDGET = 3,
  SNAKE_STATUS_INVARIANT = 4,
  SNAKE_STATUS_NULL_POINTER = 5,
  SNAKE_STATUS_INVALID_ARGUMENT = 6,
  SNAKE_STATUS_PANIC = 7,
} SnakeStatus;

typedef enum SnakeBackend {
  SNAKE_BACKEND_DETERMINISTIC = 0,
  SNAKE_BACKEND_EXHAUSTIVE = 1,
  SNAKE_BACKEND_MONTE_CARLO = 2,
} SnakeBackend;

// A parsed, validated instance.
typedef struct SnakeInstance SnakeInstance;

// The answer to one solve, with the route text when the answer is Yes.
typedef struct SnakeSolveResult SnakeSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a `snake-instance v1` text. On success `*out` receives a handle
// to release with [`snake_instance_free`].
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum SnakeStatus snake_instance_parse(const char *text, struct SnakeInstance **out);

// # Safety
// `inst` must be null or a handle from [`snake_instance_parse`] not yet freed.
void snake_instance_free(struct SnakeInstance *inst);

// Number of vertices, or 0 for a null handle.
//
// # Safety
// `inst` must be null or a live handle.
size_t snake_instance_vertex_count(const struct SnakeInstance *inst);

// Snake length, or 0 for a null handle.
//
// # Safety
// `inst` must be null or a live handle.
size_t snake_instance_k(const struct SnakeInstance *inst);

// Canonical text of the instance.
//
// # Safety
// `inst` must be a live handle and `out` a valid pointer.
enum SnakeStatus snake_instance_to_text(const struct SnakeInstance *inst, char **out);

// Exact breadth-first solve. `max_states` of 0 uses the library default.
// [`SnakeStatus::Ok`] means the search finished; read the answer from the result.
//
// # Safety
// `inst` must be a live handle and `out` a valid pointer.
enum SnakeStatus snake_solve_oracle(const struct SnakeInstance *inst,
                                    size_t max_states,
                                    struct SnakeSolveResult **out);

// Color-coding solve. `seed` and `samples` apply to the Monte Carlo
// backend (`samples` of 0 picks the default); `workers` of 0 uses the global pool.
//
// # Safety
// `inst` must be a live handle and `out` a valid pointer.
enum SnakeStatus snake_solve_fpt(const struct SnakeInstance *inst,
                                 enum SnakeBackend backend,
                                 uint64_t seed,
                                 uint64_t samples,
                                 size_t workers,
                                 struct SnakeSolveResult **out);

// # Safety
// `res` must be null or a live result handle.
void snake_result_free(struct SnakeSolveResult *res);

// 1 for Yes, 0 for No or a null handle.
//
// # Safety
// `res` must be null or a live result handle.
int32_t snake_result_is_yes(const struct SnakeSolveResult *res);

// Number of moves of the shortest route, or -1 for No.
//
// # Safety
// `res` must be null or a live result handle.
int64_t snake_result_length(const struct SnakeSolveResult *res);

// The route as `snake-route v1` text; [`SnakeStatus::No`] if there is none.
//
// # Safety
// `res` must be a live result handle and `out` a valid pointer.
enum SnakeStatus snake_result_route_text(const struct SnakeSolveResult *res, char **out);

// Checks a `snake-route v1` text against `inst`. Returns Ok for a valid
// route, No with `*failing_step` set (0 is the start configuration) for an
// illegal one, ParseError if the text does not parse.
//
// # Safety
// `inst` must be a live handle, `route` a nul-terminated string and
// `failing_step` null or a valid pointer.
enum SnakeStatus snake_verify_route(const struct SnakeInstance *inst,
                                    const char *route,
                                    size_t *failing_step);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void snake_string_free(char *s);

// Message of the last failure on this thread; empty if none. The pointer
// stays valid until the next failing call on the same thread.
const char *snake_last_error_message(void);

// Library version, a static string.
const char *snake_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SNAKEPLAN_H */
