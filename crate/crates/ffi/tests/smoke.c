#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "mic_clearing.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    rewind(f);
    char *buf = malloc(n + 1);
    if (fread(buf, 1, n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc < 2) return 2;
    char *json = slurp(argv[1]);
    if (!json) return 2;

    MicInstance *inst = NULL;
    if (mic_instance_from_json(json, &inst) != MIC_STATUS_OK) {
        fprintf(stderr, "%s\n", mic_last_error_message());
        return 1;
    }
    free(json);

    MicResult *res = NULL;
    if (mic_clear(inst, MIC_OBJECTIVE_HOURLY, &res) != MIC_STATUS_OK) return 1;

    char *s = NULL;
    for (size_t t = 1; t <= 2; t++) {
        mic_result_mcp(res, t, &s);
        printf("mcp %zu %s\n", t, s);
        mic_string_free(s);
    }
    mic_result_acceptance(res, "S1", &s);
    printf("S1 %s\n", s);
    mic_string_free(s);

    if (mic_result_mcp(res, 9, &s) != MIC_STATUS_OUT_OF_RANGE || s != NULL) return 1;
    printf("error %s\n", mic_last_error_message());

    mic_result_free(res);
    mic_instance_free(inst);
    return 0;
}
