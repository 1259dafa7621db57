#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "twospec/twospec.h"

namespace cli {

using Json = nlohmann::ordered_json;

enum Exit : int { kOk = 0, kUsage = 1, kValidation = 2, kNumeric = 3, kDegeneracy = 4, kNonConvergence = 5 };

class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

// Throws CliError carrying the library's message when status is not TS_OK.
void check(ts_status status);

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const noexcept { Free(p); }
};

using Coeff = std::unique_ptr<ts_coeff, Deleter<ts_coeff, ts_coeff_free>>;
using SpectrumHandle = std::unique_ptr<ts_spectrum, Deleter<ts_spectrum, ts_spectrum_free>>;
using DegeneracyHandle = std::unique_ptr<ts_degeneracy, Deleter<ts_degeneracy, ts_degeneracy_free>>;
using RieszHandle = std::unique_ptr<ts_riesz_report, Deleter<ts_riesz_report, ts_riesz_report_free>>;
using EstimateHandle = std::unique_ptr<ts_estimate_set, Deleter<ts_estimate_set, ts_estimate_set_free>>;
using SupHandle = std::unique_ptr<ts_sup_report, Deleter<ts_sup_report, ts_sup_report_free>>;
using LocHandle = std::unique_ptr<ts_loc_report, Deleter<ts_loc_report, ts_loc_report_free>>;
using ProblemHandle = std::unique_ptr<ts_inverse_problem, Deleter<ts_inverse_problem, ts_inverse_problem_free>>;
using ReconstructionHandle = std::unique_ptr<ts_reconstruction, Deleter<ts_reconstruction, ts_reconstruction_free>>;
using ProbeHandle = std::unique_ptr<ts_probe_report, Deleter<ts_probe_report, ts_probe_report_free>>;

// Owned (p, q) pair; view() borrows the handles for API calls.
struct Pair {
    Coeff p;
    Coeff q;
    ts_pair view() const { return ts_pair{p.get(), q.get()}; }
};

Coeff constant_coeff(double value);
// A number or a coefficient object ({"constant","cos","sin"} or {"grid"}).
Coeff coeff_from_json(const Json& value, const std::string& where);
// {"p": coeff, "q": coeff}; missing slots are zero.
Pair pair_from_json(const Json& value, const std::string& where);
Json coeff_to_json(const ts_coeff* c);

// Typed config access; wrong types raise a validation error naming the key.
int get_int(const Json& j, const char* key, int fallback);
double get_double(const Json& j, const char* key, double fallback);
bool get_bool(const Json& j, const char* key, bool fallback);
std::string get_string(const Json& j, const char* key, const std::string& fallback);
std::vector<double> get_doubles(const Json& j, const char* key);
// Rejects keys outside `allowed`.
void allow_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where);

Json load_config(const std::string& path);

// 12 significant digits.
std::string num(double v);

std::string csv_row(const std::vector<std::string>& cells);

// Collects all artifacts, then writes them in one go so that a failing run
// leaves nothing behind.
class Outputs {
public:
    void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }
    // Usage error if any target exists and overwrite is false.
    std::vector<std::string> commit(const std::string& dir, bool overwrite) const;

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string dump(const Json& j);

struct Context {
    Json config = Json::object();
    std::string out_dir = ".";
    bool force = false;
    std::optional<std::uint64_t> seed;  // --seed, overrides the config value

    std::uint64_t seed_or(std::uint64_t fallback) const;
};

const char* boundary_name(ts_boundary b);
ts_boundary boundary_from(const std::string& name);
ts_slot slot_from(const std::string& name);
const char* slot_name(ts_slot s);

}  // namespace cli
