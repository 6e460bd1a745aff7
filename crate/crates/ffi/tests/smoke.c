#include <math.h>
#include <stdio.h>
#include <string.h>

#include "plateau.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,    \
                    plateau_last_error());                            \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    const double g1[] = {0.0, -0.5, 0.25};
    const double g2[] = {0.0, 0.5, -0.25};
    const double p1[] = {0.0, 0.006, -0.003};
    PlateauProblem *p = NULL;
    CHECK(plateau_problem_new(2.0, g1, 3, g2, 3, p1, 3, NULL, 0, &p) == PLATEAU_STATUS_OK);

    PlateauZeta z;
    CHECK(plateau_problem_zeta(p, &z) == PLATEAU_STATUS_OK);
    CHECK(fabs(z.zeta - 0.027) < 1e-12 && z.gate_right);

    double lam[65];
    CHECK(plateau_lambda_map(p, 65, lam) == PLATEAU_STATUS_OK);
    CHECK(lam[0] == 0.0 && lam[64] == 2.0);

    PlateauInversion inv;
    CHECK(plateau_invert_left(p, 5.0, 1.0, &inv) == PLATEAU_STATUS_OUTSIDE_DOMAIN);
    CHECK(plateau_invert_left(p, 0.0, 1.0, &inv) == PLATEAU_STATUS_OK);
    CHECK(strlen(plateau_last_error()) > 0);

    PlateauGraph *g = NULL;
    CHECK(plateau_left_graph(p, 33, 33, &g) == PLATEAU_STATUS_OK);
    double v;
    CHECK(plateau_graph_eval(g, 0.0, 1.0, &v) == PLATEAU_STATUS_OK);
    CHECK(fabs(v - inv.u) < 1e-6);
    plateau_graph_free(g);
    plateau_problem_free(p);

    CHECK(strcmp(plateau_gate_closed_form(PLATEAU_GATE_RIGHT), "zeta < (sqrt(721) - 25)/48") == 0);
    puts("ok");
    return 0;
}
