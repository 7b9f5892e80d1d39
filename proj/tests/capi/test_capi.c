/* Exercises the shared library through its C header only. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "roundreach/roundreach.h"

static int failures = 0;

#define EXPECT(cond)                                                                                   \
    do {                                                                                               \
        if (!(cond)) {                                                                                 \
            fprintf(stderr, "%s:%d: expectation failed: %s (%s)\n", __FILE__, __LINE__, #cond,          \
                    roundreach_last_error());                                                          \
            ++failures;                                                                                \
        }                                                                                              \
    } while (0)

static const char* doubling =
    "{\"version\": \"roundreach/1\", \"kind\": \"rational\","
    " \"rounding\": {\"shape\": \"argand\", \"kind\": \"floor\", \"g\": \"1\"},"
    " \"matrix\": [[\"2\"]], \"initial\": [\"3\"], \"target\": [\"12\"]}";

static const char* rotation =
    "{\"version\": \"roundreach/1\", \"kind\": \"jnf\","
    " \"rounding\": {\"shape\": \"argand\", \"kind\": \"minerr\", \"g\": \"1\"},"
    " \"blocks\": [{\"size\": 1, \"modulus\": \"1\", \"angle\": \"1/42 pi\"}],"
    " \"initial\": [\"10\"], \"target\": [\"0\"]}";

static void test_decide(void)
{
    roundreach_instance* inst = NULL;
    roundreach_outcome outcome = ROUNDREACH_UNDECIDED;
    char* json = NULL;

    EXPECT(roundreach_instance_parse(doubling, &inst) == ROUNDREACH_OK);
    EXPECT(roundreach_instance_dimension(inst) == 1);
    EXPECT(roundreach_decide(inst, NULL, &outcome, &json) == ROUNDREACH_OK);
    EXPECT(outcome == ROUNDREACH_REACHED);
    EXPECT(json != NULL && strstr(json, "\"step\":2") != NULL);
    roundreach_string_free(json);
    json = NULL;

    EXPECT(roundreach_simulate(inst, 3, &json) == ROUNDREACH_OK);
    EXPECT(json != NULL && strstr(json, "\"hit\":2") != NULL);
    roundreach_string_free(json);
    json = NULL;

    EXPECT(roundreach_bounds(inst, ROUNDREACH_BOUNDS_AUTO, &json) == ROUNDREACH_OK);
    EXPECT(json != NULL && strstr(json, "step bound") != NULL);
    roundreach_string_free(json);
    roundreach_instance_free(inst);

    inst = NULL;
    EXPECT(roundreach_instance_parse(rotation, &inst) == ROUNDREACH_OK);
    EXPECT(roundreach_decide(inst, NULL, &outcome, NULL) == ROUNDREACH_OK);
    EXPECT(outcome == ROUNDREACH_UNDECIDED);

    roundreach_decide_options opts;
    roundreach_decide_options_init(&opts);
    EXPECT(opts.oracle == 0);
    opts.oracle = 1;
    opts.oracle_steps = 100000;
    EXPECT(roundreach_decide(inst, &opts, &outcome, NULL) == ROUNDREACH_OK);
    EXPECT(outcome == ROUNDREACH_NOT_REACHED);
    roundreach_instance_free(inst);
}

static void test_errors(void)
{
    roundreach_instance* inst = NULL;
    EXPECT(roundreach_instance_parse("{", &inst) == ROUNDREACH_E_PARSE);
    EXPECT(strlen(roundreach_last_error()) > 0);
    EXPECT(inst == NULL);
    EXPECT(roundreach_instance_load("/nonexistent/x.json", &inst) == ROUNDREACH_E_IO);
    EXPECT(roundreach_instance_parse(NULL, &inst) == ROUNDREACH_E_INVALID_ARGUMENT);
    EXPECT(strcmp(roundreach_status_name(ROUNDREACH_E_GADGET_BROKEN), "gadget-broken") == 0);
    EXPECT(strcmp(roundreach_status_name(ROUNDREACH_OK), "ok") == 0);
    EXPECT(roundreach_instance_dimension(NULL) == 0);
    roundreach_instance_free(NULL);
}

static void test_qbf(void)
{
    const char* formula = "forall x1 exists x2 : (x1 | x2)";
    int value = 0;
    EXPECT(roundreach_evaluate_qbf(formula, &value) == ROUNDREACH_OK);
    EXPECT(value == 1);
    EXPECT(roundreach_evaluate_qbf("forall x1 exists x2 : (x1 & x2)", &value) == ROUNDREACH_OK);
    EXPECT(value == 0);

    roundreach_instance* inst = NULL;
    char* summary = NULL;
    EXPECT(roundreach_compile_qbf(formula, "floor", "11/10", 0, &inst, &summary) == ROUNDREACH_OK);
    EXPECT(roundreach_instance_dimension(inst) == 192);
    EXPECT(summary != NULL && strstr(summary, "\"dimension\":192") != NULL);
    roundreach_string_free(summary);
    roundreach_instance_free(inst);

    inst = NULL;
    EXPECT(roundreach_compile_qbf(formula, "floor", "3", 0, &inst, NULL) == ROUNDREACH_E_GADGET_BROKEN);
    EXPECT(roundreach_compile_qbf("exists x1 : x1", "floor", NULL, 0, &inst, NULL) ==
           ROUNDREACH_E_NONCANONICAL_PREFIX);
    EXPECT(roundreach_compile_qbf("exists x1 : x1", "floor", NULL, 1, &inst, NULL) == ROUNDREACH_OK);
    roundreach_instance_free(inst);
}

static void test_rotation(void)
{
    int64_t x = 0;
    int64_t y = 0;
    EXPECT(roundreach_rotate_point(10, 0, "pi/42", &x, &y) == ROUNDREACH_OK);
    EXPECT(x == 10 && y == 1);
    EXPECT(roundreach_rotate_point(1, 0, "pi/", &x, &y) == ROUNDREACH_E_PARSE);

    char* summary = NULL;
    EXPECT(roundreach_rotate_disk(1, "pi/2", 100, NULL, &summary) == ROUNDREACH_OK);
    EXPECT(summary != NULL && strstr(summary, "\"starts\":5") != NULL);
    roundreach_string_free(summary);
}

int main(void)
{
    EXPECT(strcmp(roundreach_version(), "0.1.0") == 0);
    test_decide();
    test_errors();
    test_qbf();
    test_rotation();
    if (failures != 0) {
        fprintf(stderr, "%d expectation(s) failed\n", failures);
        return EXIT_FAILURE;
    }
    printf("all C API checks passed\n");
    return EXIT_SUCCESS;
}
