#include <stdio.h>
#include <string.h>

#include "bqltl.h"

int main(void) {
  BqltlFormula *f = NULL;
  if (bqltl_formula_parse("E{y} A{x} (F x <-> F y)", &f) != BQLTL_CODE_OK) {
    fprintf(stderr, "parse: %s\n", bqltl_last_error());
    return 1;
  }
  BqltlVerdict *v = NULL;
  if (bqltl_solve(f, BQLTL_SEMANTICS_WEAK_BEHAVIORAL, 0, 0, &v) != BQLTL_CODE_OK) {
    fprintf(stderr, "solve: %s\n", bqltl_last_error());
    return 1;
  }
  if (bqltl_verdict_status(v) != BQLTL_STATUS_SAT) return 2;
  char *w = bqltl_verdict_witness_json(v);
  bool valid = false;
  if (bqltl_validate(f, BQLTL_SEMANTICS_WEAK_BEHAVIORAL, w, &valid) != BQLTL_CODE_OK || !valid) return 3;
  bqltl_string_free(w);
  bqltl_verdict_free(v);

  BqltlFormula *bad = NULL;
  if (bqltl_formula_parse("A{x", &bad) != BQLTL_CODE_PARSE || bad != NULL) return 4;
  if (strlen(bqltl_last_error()) == 0) return 5;

  bqltl_formula_free(f);
  puts("ok");
  return 0;
}
