/* Smoke test for the C ABI: build the circular null ruled example, read
 * curvatures and the verdict.
 *
 * Build from the repository root after `cargo build --workspace`:
 *   cc crates/capi/examples/smoke.c -Icrates/capi/include \
 *      -Ltarget/debug -lquasumb_capi -lm -o smoke
 *   LD_LIBRARY_PATH=target/debug ./smoke
 */
#include <quasumb.h>
#include <stdio.h>

int main(void) {
    QsmSurface *surface = NULL;
    QsmStatus st = qsm_surface_builtin("ex2", &surface);
    if (st != QSM_STATUS_OK) {
        fprintf(stderr, "builtin failed: %s\n", qsm_last_error());
        return 1;
    }

    QsmPointReport report;
    st = qsm_point_report(surface, 0.3, -0.4, 0.0, &report);
    if (st != QSM_STATUS_OK) {
        fprintf(stderr, "report failed: %s\n", qsm_last_error());
        return 1;
    }
    printf("K = %.15g, H = %.15g, class = %d\n", report.gauss, report.mean,
           (int)report.class_);

    char *json = NULL;
    st = qsm_classify_json(surface, -3.14, 3.14, 32, -1.0, 1.0, 32, 0.0, &json);
    if (st != QSM_STATUS_OK) {
        fprintf(stderr, "classify failed: %s\n", qsm_last_error());
        return 1;
    }
    printf("%s\n", json);
    qsm_string_free(json);
    qsm_surface_free(surface);
    printf("version %s\n", qsm_version());
    return 0;
}
