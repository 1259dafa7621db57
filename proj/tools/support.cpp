#include "support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cli {

namespace fs = std::filesystem;

void check(ts_status status) {
    if (status == TS_OK) return;
    const int code = status == TS_ERR_INTERNAL ? kNumeric : static_cast<int>(status);
    throw CliError(code, std::string(ts_status_name(status)) + " error: " + ts_last_error());
}

Coeff constant_coeff(double value) {
    ts_coeff* c = nullptr;
    check(ts_coeff_series(value, nullptr, 0, nullptr, 0, &c));
    return Coeff(c);
}

Coeff coeff_from_json(const Json& value, const std::string& where) {
    if (value.is_number()) return constant_coeff(value.get<double>());
    if (!value.is_object()) throw CliError(kValidation, where + ": coefficient must be a number or an object");
    ts_coeff* c = nullptr;
    const ts_status s = ts_coeff_from_json(value.dump().c_str(), &c);
    if (s != TS_OK) throw CliError(kValidation, where + ": " + ts_last_error());
    return Coeff(c);
}

Pair pair_from_json(const Json& value, const std::string& where) {
    if (!value.is_object()) throw CliError(kValidation, where + ": pair must be an object {\"p\", \"q\"}");
    allow_keys(value, {"p", "q"}, where);
    Pair pair;
    pair.p = value.contains("p") ? coeff_from_json(value.at("p"), where + ".p") : constant_coeff(0.0);
    pair.q = value.contains("q") ? coeff_from_json(value.at("q"), where + ".q") : constant_coeff(0.0);
    return pair;
}

Json coeff_to_json(const ts_coeff* c) {
    const std::size_t modes = ts_coeff_modes(c);
    std::vector<double> a(modes), b(modes);
    double c0 = 0.0;
    check(ts_coeff_terms(c, &c0, a.data(), b.data(), modes));
    Json j = Json::object();
    j["constant"] = c0;
    j["cos"] = a;
    j["sin"] = b;
    return j;
}

namespace {

[[noreturn]] void bad_type(const char* key, const char* type) {
    throw CliError(kValidation, std::string("config field '") + key + "' must be " + type);
}

}  // namespace

int get_int(const Json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) bad_type(key, "an integer");
    return j.at(key).get<int>();
}

double get_double(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) bad_type(key, "a number");
    return j.at(key).get<double>();
}

bool get_bool(const Json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) bad_type(key, "a boolean");
    return j.at(key).get<bool>();
}

std::string get_string(const Json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) bad_type(key, "a string");
    return j.at(key).get<std::string>();
}

std::vector<double> get_doubles(const Json& j, const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) bad_type(key, "an array of numbers");
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) bad_type(key, "an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

void allow_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const auto& a : allowed) ok = ok || item.key() == a;
        if (!ok) throw CliError(kValidation, where + ": unknown field '" + item.key() + "'");
    }
}

Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(kValidation, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Json j;
    try {
        j = Json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw CliError(kValidation, "malformed JSON in '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw CliError(kValidation, "config '" + path + "' must hold a JSON object");
    return j;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

std::vector<std::string> Outputs::commit(const std::string& dir, bool overwrite) const {
    const fs::path base(dir);
    if (!overwrite)
        for (const auto& [name, content] : files_)
            if (fs::exists(base / name))
                throw CliError(kUsage, "refusing to overwrite '" + (base / name).string() + "' (use --force)");
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec) throw CliError(kValidation, "cannot create output directory '" + dir + "': " + ec.message());
    std::vector<std::string> written;
    for (const auto& [name, content] : files_) {
        const fs::path p = base / name;
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw CliError(kValidation, "cannot write '" + p.string() + "'");
        written.push_back(p.string());
    }
    return written;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::uint64_t Context::seed_or(std::uint64_t fallback) const {
    if (seed) return *seed;
    if (config.contains("seed")) {
        const auto& s = config.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw CliError(kValidation, "config field 'seed' must be a nonnegative integer");
        return s.get<std::uint64_t>();
    }
    return fallback;
}

const char* boundary_name(ts_boundary b) { return b == TS_DIRICHLET ? "dirichlet" : "dirichlet_neumann"; }

ts_boundary boundary_from(const std::string& name) {
    if (name == "dirichlet" || name == "D") return TS_DIRICHLET;
    if (name == "dirichlet_neumann" || name == "dirichlet-neumann" || name == "DN") return TS_DIRICHLET_NEUMANN;
    throw CliError(kValidation, "unknown boundary '" + name + "'");
}

ts_slot slot_from(const std::string& name) {
    if (name == "p") return TS_SLOT_P;
    if (name == "q") return TS_SLOT_Q;
    throw CliError(kValidation, "slot must be \"p\" or \"q\", got '" + name + "'");
}

const char* slot_name(ts_slot s) { return s == TS_SLOT_P ? "p" : "q"; }

}  // namespace cli
