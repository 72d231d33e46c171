#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relatom/hamiltonian.hpp"

// Flat key=value run configuration.  One key per line, '#' starts a comment,
// unknown keys are rejected so typos surface as errors instead of silently
// falling back to defaults.

namespace relatom::cfg {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& detail)
        : std::runtime_error("config key '" + key + "': " + detail), key_(std::move(key)) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

class KeyValueConfig {
public:
    static KeyValueConfig from_text(const std::string& text) {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line_no), "expected key = value, got '" + trimmed + "'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
            if (!cfg.values_.emplace(key, value).second) throw ConfigError(key, "duplicate key");
        }
        return cfg;
    }

    static KeyValueConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError(path, "cannot open config file");
        std::ostringstream buf;
        buf << in.rdbuf();
        return from_text(buf.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        return parse_double(key, it->second);
    }

    int get_int(const std::string& key, int fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        try {
            std::size_t pos = 0;
            const int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, "expected an integer, got '" + it->second + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        const std::string& v = it->second;
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        throw ConfigError(key, "expected a boolean, got '" + v + "'");
    }

    Eigen::Vector3d get_vector3(const std::string& key, const Eigen::Vector3d& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        std::istringstream in(it->second);
        Eigen::Vector3d out;
        if (!(in >> out[0] >> out[1] >> out[2]) || !(in >> std::ws).eof())
            throw ConfigError(key, "expected three numbers, got '" + it->second + "'");
        return out;
    }

    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        std::vector<double> out;
        std::istringstream in(it->second);
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(parse_double(key, trim(item)));
        if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
        return out;
    }

    // keys that were parsed but never requested by the active command
    std::vector<std::string> unknown_keys() const {
        std::vector<std::string> out;
        for (const auto& [key, value] : values_)
            if (!consumed_.count(key)) out.push_back(key);
        return out;
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double parse_double(const std::string& key, const std::string& text) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, "expected a number, got '" + text + "'");
        }
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

// Defaults give a resonant weak-coupling model whose vacuum evolution is the
// textbook inversion oscillation; every key below overrides one field.
inline ham::ModelParams default_model() {
    ham::ModelParams p;
    p.Omega = 0.25;  // keeps both level branches positive at the default mass
    p.Omega_tilde = 1.0;
    p.omega = 1.0;
    p.d = 0.05;
    p.field = Eigen::Vector3d{0.0, 0.0, 1.0};
    p.n_max = 10;
    p.coupling = ham::CouplingForm::ScalarAligned;
    return p;
}

inline ham::ModelParams model_params(const KeyValueConfig& cfg) {
    ham::ModelParams p = default_model();
    p.m = cfg.get_double("model.m", p.m);
    p.c = cfg.get_double("model.c", p.c);
    p.hbar = cfg.get_double("model.hbar", p.hbar);
    p.Omega = cfg.get_double("model.Omega", p.Omega);
    p.Omega_tilde = cfg.get_double("model.Omega_tilde", p.Omega_tilde);
    p.omega = cfg.get_double("model.omega", p.omega);
    p.d = cfg.get_double("model.d", p.d);
    p.kappa = cfg.get_vector3("model.kappa", p.kappa);
    p.field = cfg.get_vector3("model.field", p.field);
    p.n_max = cfg.get_int("model.n_max", p.n_max);
    p.aligned_sign = cfg.get_int("model.aligned_sign", p.aligned_sign);

    const std::string coupling = cfg.get_string("model.coupling", "scalar-aligned");
    if (coupling == "scalar-aligned")
        p.coupling = ham::CouplingForm::ScalarAligned;
    else if (coupling == "full-dipole")
        p.coupling = ham::CouplingForm::FullDipoleTensor;
    else
        throw ConfigError("model.coupling", "expected scalar-aligned or full-dipole, got '" + coupling + "'");
    return p;
}

inline ham::ModelKind model_kind(const KeyValueConfig& cfg) {
    const std::string kind = cfg.get_string("model.kind", "jaynes-cummings");
    for (ham::ModelKind k : {ham::ModelKind::RelativisticRabi, ham::ModelKind::NonRelRabi,
                             ham::ModelKind::JaynesCummingsRelativistic, ham::ModelKind::JaynesCummingsNonRel})
        if (kind == ham::model_kind_name(k)) return k;
    throw ConfigError("model.kind",
                      "expected relativistic-rabi, nonrelativistic-rabi, jaynes-cummings-relativistic or "
                      "jaynes-cummings, got '" +
                          kind + "'");
}

inline ham::OmegaLink omega_link(const KeyValueConfig& cfg) {
    const std::string link = cfg.get_string("compare.link", "consistent");
    if (link == "consistent") return ham::OmegaLink::ConsistentSplitting;
    if (link == "mass-scaled") return ham::OmegaLink::LiteralMassScaled;
    throw ConfigError("compare.link", "expected consistent or mass-scaled, got '" + link + "'");
}

}  // namespace relatom::cfg
