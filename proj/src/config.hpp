#pragma once

#include "intmath.hpp"

namespace cmll {

// Runtime limits and defaults. Flags override environment variables, which
// override the defaults below.
struct Config {
    long bits = 256;        // CMLL_BITS: big-float precision for j-invariants
    int prec = 16;          // CMLL_PREC: pi-adic precision
    int deg = 32;           // CMLL_DEG: series degree cutoff
    Int cap_norm = 1000000; // CMLL_CAP_NORM: ideal-norm enumeration cap
    long cap_group = 100000; // group-order cap

    static Config from_env();
    void validate() const;
};

} // namespace cmll
