#include "mtb/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace mtb {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_double(const std::string& s, int line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw ConfigError("expected a number, got '" + s + "'", line);
    }
    return v;
}

std::int64_t parse_int(const std::string& s, int line) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw ConfigError("expected an integer, got '" + s + "'", line);
    }
    return v;
}

std::uint64_t parse_uint(const std::string& s, int line) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty() || s[0] == '-') {
        throw ConfigError("expected a nonnegative integer, got '" + s + "'", line);
    }
    return v;
}

std::vector<double> parse_alpha_list(const std::string& s, int line) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        const double a = parse_double(item, line);
        try {
            Alpha check(a);  // domain validation only
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what(), line);
        }
        out.push_back(a);
    }
    if (out.empty()) throw ConfigError("empty list", line);
    return out;
}

std::vector<double> parse_positive_list(const std::string& s, int line, const char* what) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        const double v = parse_double(item, line);
        if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be > 0", line);
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty list", line);
    return out;
}

std::vector<std::int64_t> parse_horizon_list(const std::string& s, int line) {
    std::vector<std::int64_t> out;
    for (const auto& item : split_list(s)) {
        const std::int64_t v = parse_int(item, line);
        if (v < 1) throw ConfigError("horizon n must be >= 1", line);
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty list", line);
    return out;
}

std::int64_t parse_n_max(const std::string& s, int line) {
    const std::int64_t v = parse_int(s, line);
    if (v < 1) throw ConfigError("n-max must be >= 1", line);
    return v;
}

}  // namespace

SweepConfig parse_config(std::istream& in) {
    SweepConfig cfg;
    std::string section;
    std::string raw;
    int line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section == "lemma1") cfg.lemma1.emplace();
            else if (section == "lemma2-exact") cfg.lemma2.emplace();
            else if (section == "theorem2-exact") cfg.theorem2.emplace();
            else if (section == "corollary1-exact") cfg.corollary1.emplace();
            else if (section == "theorem1-mc") cfg.theorem1_mc.emplace();
            else if (section == "certificate") cfg.certificate.emplace();
            else if (section != "global")
                throw ConfigError("unknown section [" + section + "]", line_no);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError("expected key = value", line_no);

        if (section.empty()) throw ConfigError("key outside any section", line_no);

        if (section == "global") {
            if (key == "seed") cfg.seed = parse_uint(value, line_no);
            else if (key == "delta") {
                cfg.delta = parse_double(value, line_no);
                if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
                    throw ConfigError("delta must lie in (0, 1)", line_no);
            } else if (key == "partitions") {
                cfg.partitions = static_cast<int>(parse_int(value, line_no));
                if (cfg.partitions < 1) throw ConfigError("partitions must be >= 1", line_no);
            } else if (key == "enum-budget") {
                cfg.enum_budget = parse_uint(value, line_no);
            } else if (key == "out") cfg.out_jsonl = value;
            else if (key == "summary") cfg.out_summary = value;
            else throw ConfigError("unknown key '" + key + "' in [global]", line_no);
        } else if (section == "lemma1") {
            if (key == "n-max") cfg.lemma1->n_max = parse_n_max(value, line_no);
            else throw ConfigError("unknown key '" + key + "' in [lemma1]", line_no);
        } else if (section == "lemma2-exact") {
            if (key == "n-max") cfg.lemma2->n_max = parse_n_max(value, line_no);
            else if (key == "x") cfg.lemma2->xs = parse_positive_list(value, line_no, "x");
            else if (key == "v") cfg.lemma2->vs = parse_positive_list(value, line_no, "v");
            else throw ConfigError("unknown key '" + key + "' in [lemma2-exact]", line_no);
        } else if (section == "theorem2-exact") {
            if (key == "n-max") cfg.theorem2->n_max = parse_n_max(value, line_no);
            else if (key == "alpha") cfg.theorem2->alphas = parse_alpha_list(value, line_no);
            else if (key == "x") cfg.theorem2->xs = parse_positive_list(value, line_no, "x");
            else if (key == "v") cfg.theorem2->vs = parse_positive_list(value, line_no, "v");
            else throw ConfigError("unknown key '" + key + "' in [theorem2-exact]", line_no);
        } else if (section == "corollary1-exact") {
            if (key == "alpha") cfg.corollary1->alphas = parse_alpha_list(value, line_no);
            else if (key == "n") cfg.corollary1->ns = parse_horizon_list(value, line_no);
            else if (key == "x") cfg.corollary1->xs = parse_positive_list(value, line_no, "x");
            else throw ConfigError("unknown key '" + key + "' in [corollary1-exact]", line_no);
        } else if (section == "theorem1-mc") {
            if (key == "alpha") cfg.theorem1_mc->alphas = parse_alpha_list(value, line_no);
            else if (key == "n") cfg.theorem1_mc->ns = parse_horizon_list(value, line_no);
            else if (key == "x") cfg.theorem1_mc->xs = parse_positive_list(value, line_no, "x");
            else if (key == "trials") {
                cfg.theorem1_mc->trials = parse_uint(value, line_no);
                if (cfg.theorem1_mc->trials < 1)
                    throw ConfigError("trials must be >= 1", line_no);
            } else if (key == "generators") {
                cfg.theorem1_mc->generators.clear();
                for (const auto& name : split_list(value)) {
                    try {
                        cfg.theorem1_mc->generators.push_back(generator_kind_from_string(name));
                    } catch (const std::invalid_argument& e) {
                        throw ConfigError(e.what(), line_no);
                    }
                }
                if (cfg.theorem1_mc->generators.empty())
                    throw ConfigError("empty generator list", line_no);
            } else throw ConfigError("unknown key '" + key + "' in [theorem1-mc]", line_no);
        } else if (section == "certificate") {
            if (key == "alpha") cfg.certificate->alphas = parse_alpha_list(value, line_no);
            else if (key == "n-max") cfg.certificate->n_max = parse_n_max(value, line_no);
            else throw ConfigError("unknown key '" + key + "' in [certificate]", line_no);
        }
    }
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path);
    return parse_config(in);
}

}  // namespace mtb
