#include <math.h>
#include <stdio.h>
#include <string.h>

#include "dynamap.h"

#define CHECK(call)                                                              \
    do {                                                                         \
        DynamapStatus s_ = (call);                                               \
        if (s_ != DYNAMAP_STATUS_OK) {                                           \
            const char *m_ = dynamap_last_error_message();                       \
            fprintf(stderr, "%s: %s (%s)\n", #call, dynamap_status_name(s_),     \
                    m_ ? m_ : "");                                               \
            return 1;                                                            \
        }                                                                        \
    } while (0)

int main(void) {
    DynamapBasis *basis = NULL;
    CHECK(dynamap_basis_new(3, &basis));
    double gram = -1.0;
    CHECK(dynamap_basis_gram_residual(basis, &gram));
    dynamap_basis_free(basis);
    if (gram > 1e-12) {
        fprintf(stderr, "gram residual %g\n", gram);
        return 1;
    }

    DynamapScenario *scn = NULL;
    CHECK(dynamap_scenario_demo(false, &scn));
    DynamapLinearMap *full = NULL;
    DynamapLinearMap *cp = NULL;
    CHECK(dynamap_full_linear_map(scn, 3.65, &full));
    CHECK(dynamap_cp_linear_part(scn, 3.65, &cp));

    double min_full = 0.0, min_cp = 0.0;
    CHECK(dynamap_linear_map_min_choi_eigenvalue(full, &min_full));
    CHECK(dynamap_linear_map_min_choi_eigenvalue(cp, &min_cp));

    char *json = NULL;
    CHECK(dynamap_linear_map_to_json(cp, &json));
    int has_kind = strstr(json, "\"kind\":\"linear\"") != NULL;
    dynamap_string_free(json);

    DynamapStatus bad = dynamap_basis_new(0, &basis);

    dynamap_linear_map_free(full);
    dynamap_linear_map_free(cp);
    dynamap_scenario_free(scn);

    printf("min_choi_full=%.6e min_choi_cp=%.6e\n", min_full, min_cp);
    if (!(min_full <= -1e-3) || !(min_cp >= -1e-9) || !has_kind) return 1;
    if (bad != DYNAMAP_STATUS_INVALID_ARGUMENT || dynamap_last_error_message() == NULL) return 1;
    return 0;
}
