#include <stdio.h>
#include <string.h>

#include "snakeplan.h"

static const char *PATH4 =
    "snake-instance v1\nk: 2\nvertices: grid\n0,0\n0,1\n0,2\n0,3\ninit: 0,1 0,0\nfin: 0,3 0,2\n";

int main(void) {
    SnakeInstance *inst = NULL;
    if (snake_instance_parse(PATH4, &inst) != SNAKE_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", snake_last_error_message());
        return 10;
    }
    SnakeSolveResult *res = NULL;
    if (snake_solve_fpt(inst, SNAKE_BACKEND_EXHAUSTIVE, 0, 0, 1, &res) != SNAKE_STATUS_OK) {
        fprintf(stderr, "solve: %s\n", snake_last_error_message());
        return 11;
    }
    char *route = NULL;
    if (snake_result_route_text(res, &route) != SNAKE_STATUS_OK) {
        return 12;
    }
    size_t step = 0;
    SnakeStatus v = snake_verify_route(inst, route, &step);
    printf("yes=%d length=%lld verify=%d n=%zu k=%zu\n", snake_result_is_yes(res),
           (long long)snake_result_length(res), (int)v, snake_instance_vertex_count(inst),
           snake_instance_k(inst));
    SnakeInstance *bad = NULL;
    SnakeStatus p = snake_instance_parse("snake-instance v1\nk: 1\n", &bad);
    printf("bad=%d %s\n", (int)p, snake_last_error_message());
    snake_string_free(route);
    snake_result_free(res);
    snake_instance_free(inst);
    return 0;
}
