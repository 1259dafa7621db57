#pragma once

#include <string>

#include "support.hpp"

namespace cli {

struct ScanArgs {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 0;
    bool pi2_units = false;
    double a2 = 0.0;
    int n_max = 8;
    double tol = 1e-6;
};

int run_spectrum(const Context& ctx);
int run_inverse(const Context& ctx, const std::string& config_dir);
int run_riesz(const Context& ctx);
int run_verify(const Context& ctx, const std::string& estimate);
int run_scan(const Context& ctx, const ScanArgs& args);
int run_probe(const Context& ctx, int trials);

}  // namespace cli
