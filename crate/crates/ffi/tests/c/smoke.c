#include <math.h>
#include <stdio.h>
#include <string.h>

#include "h3_biharmonic.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,    \
                    __LINE__, #cond);                                 \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    H3bGeometry *g = NULL;
    CHECK(h3b_geometry_new(0.0, 1.0, H3B_PATH_AUTO, &g) == H3B_STATUS_OK);
    double p[3] = {1.0, -2.0, 0.5};
    double r[81];
    CHECK(h3b_geometry_riemann(g, p, r) == H3B_STATUS_OK);
    CHECK(fabs(r[27 * 0 + 9 * 1 + 3 * 0 + 1] + 0.75) < 1e-12);
    double conn[27];
    CHECK(h3b_geometry_connection(g, p, conn) == H3B_STATUS_OK);
    CHECK(fabs(conn[9 * 0 + 3 * 1 + 2] - 0.5) < 1e-12);
    h3b_geometry_free(g);

    H3bHelixInvariants inv;
    CHECK(h3b_helix_invariants(0.3, H3B_BRANCH_PLUS, &inv) == H3B_STATUS_OK);
    CHECK(fabs(inv.k * inv.k + inv.tau * inv.tau + inv.b3 * inv.b3 - 0.25) < 1e-12);
    CHECK(h3b_helix_invariants(1.5, H3B_BRANCH_PLUS, &inv) == H3B_STATUS_INADMISSIBLE);
    char msg[256];
    CHECK(h3b_last_error(msg, sizeof msg) > 0);
    CHECK(strstr(msg, "inadmissible") != NULL);

    double offsets[4] = {1.0, 1.0, 1.0, 0.0};
    H3bCurve *c = NULL;
    CHECK(h3b_helix_new(0.3217505543966422, H3B_BRANCH_PLUS, offsets, 0.0, 31.41592653589793, 2001, &c) == H3B_STATUS_OK);
    CHECK(h3b_curve_len(c) == 2001);
    H3bClassification cls;
    CHECK(h3b_curve_classify(c, &cls) == H3B_STATUS_OK);
    CHECK(cls.verdict == H3B_VERDICT_NONGEODESIC_BIHARMONIC);
    CHECK(cls.max_tau2 < 1e-5);
    h3b_curve_free(c);

    printf("ok %s\n", h3b_version());
    return 0;
}
