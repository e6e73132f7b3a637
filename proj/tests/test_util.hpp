#ifndef PEARCEY_TEST_UTIL_HPP
#define PEARCEY_TEST_UTIL_HPP

#include <cmath>

// Absolute-tolerance comparison; pair with CHECK_MESSAGE for diagnostics.
inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

#define CHECK_CLOSE(a, b, tol) \
    CHECK_MESSAGE(close((a), (b), (tol)), (a), " vs ", (b), " tol ", (tol))

#endif
