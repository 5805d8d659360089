#pragma once

// Runs the built-in oracle-equivalence suite: frozen reference constants,
// exact identities, serialization round-trips, and resource accounting.
// Prints one [PASS]/[FAIL] line per check; returns 0 iff all pass.
int run_selftest();
