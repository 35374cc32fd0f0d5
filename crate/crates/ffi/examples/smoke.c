#include <stdio.h>
#include "maniac.h"

int main(void) {
    ManiacNetwork *net = NULL;
    ManiacCuts cuts;
    if (maniac_network_reference(257, &net) != MANIAC_STATUS_OK) return 1;
    if (maniac_network_cuts(net, &cuts) != MANIAC_STATUS_OK) return 1;
    printf("C1=%zu C2=%zu C=%zu edges=%zu\n", cuts.c1, cuts.c2, cuts.c, maniac_network_num_edges(net));
    maniac_network_free(net);

    const char *cfg = "{\"network\": \"reference\", \"params\": {\"p\": 257, \"z\": 1, \"R1\": 1, \"R2\": 2},"
                      " \"mode\": \"coherent\"}";
    ManiacExperiment *exp = NULL;
    if (maniac_experiment_from_json(cfg, &exp) != MANIAC_STATUS_OK) {
        char *msg = maniac_last_error();
        fprintf(stderr, "%s\n", msg ? msg : "unknown error");
        maniac_string_free(msg);
        return 1;
    }
    ManiacSummary s;
    if (maniac_experiment_campaign(exp, 50, 7, 1, &s) != MANIAC_STATUS_OK) return 1;
    printf("success_rate=%.3f bound=%.3f\n", s.success_rate, s.bound);
    maniac_experiment_free(exp);
    return s.success_rate >= s.bound - s.margin ? 0 : 1;
}
