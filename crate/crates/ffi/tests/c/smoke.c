#include <stdio.h>
#include <string.h>
#include "noct.h"

int main(void) {
    NoctModel *m = NULL;
    if (noct_model_builtin("blp-p2", &m) != NOCT_STATUS_OK) {
        fprintf(stderr, "%s\n", noct_last_error_message());
        return 1;
    }
    char *out = NULL;
    if (noct_xi(m, "on-E", "2H-E", &out) != NOCT_STATUS_OK) {
        fprintf(stderr, "%s\n", noct_last_error_message());
        return 1;
    }
    int ok = strstr(out, "\"xi\": \"1\"") != NULL;
    noct_string_free(out);
    NoctStatus s = noct_xi(m, "on-E", "H-E", &out);
    ok = ok && s == NOCT_STATUS_DOMAIN && noct_last_error_message() != NULL;
    printf("rank %zu\n", noct_model_rank(m));
    noct_model_free(m);
    return ok ? 0 : 2;
}
