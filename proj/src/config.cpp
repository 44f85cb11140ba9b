#include "pas/config.hpp"

#include <fstream>

#include "pas/errors.hpp"

namespace pas {

using nlohmann::json;

namespace {

const json& expect(const json& j, const std::string& field) {
    auto it = j.find(field);
    if (it == j.end()) throw ConfigError("missing field '" + field + "'");
    return *it;
}

int expect_int(const json& j, const std::string& field) {
    const json& v = expect(j, field);
    if (!v.is_number_integer()) throw ConfigError("field '" + field + "' must be an integer");
    return v.get<int>();
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError("field '" + field + "' must be numeric");
    return v.get<double>();
}

Grid<double> expect_real_matrix(const json& v, int rows, int cols, const std::string& field) {
    if (!v.is_array() || static_cast<int>(v.size()) != rows)
        throw ConfigError("field '" + field + "' must be a " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " matrix");
    Grid<double> out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = v[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ConfigError("field '" + field + "' row " + std::to_string(r) + " must have " +
                              std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c)
            out(r, c) = as_number(row[static_cast<size_t>(c)], field);
    }
    return out;
}

} // namespace

AppConfig config_from_json(const json& j) {
    AppConfig cfg;
    cfg.name = j.value("name", "unnamed");

    ModelParams& p = cfg.params;
    p.num_wards = expect_int(j, "num_wards");
    p.num_types = expect_int(j, "num_types");
    const int K = p.num_wards, I = p.num_types;
    if (K < 1 || I < 1) throw ConfigError("num_wards and num_types must be positive");

    {
        const json& caps = expect(j, "capacities");
        if (!caps.is_array()) throw ConfigError("field 'capacities' must be an array");
        for (const auto& c : caps) p.capacity.push_back(c.get<int>());
    }
    {
        const json& wc = expect(j, "waiting_capacity");
        if (wc.is_string() && wc.get<std::string>() == "unbounded")
            p.waiting_capacity = std::nullopt;
        else if (wc.is_number_integer())
            p.waiting_capacity = wc.get<int>();
        else
            throw ConfigError("field 'waiting_capacity' must be an integer or \"unbounded\"");
    }
    {
        const json& rates = expect(j, "arrival_rates");
        if (!rates.is_array()) throw ConfigError("field 'arrival_rates' must be an array");
        for (const auto& r : rates) p.arrival_rate.push_back(as_number(r, "arrival_rates"));
    }
    p.departure_prob = expect_real_matrix(expect(j, "departure_probs"), K, I, "departure_probs");
    {
        const json& ord = expect(j, "preference_order");
        p.preference_rank = Grid<int>(I, K);
        if (!ord.is_array() || static_cast<int>(ord.size()) != I)
            throw ConfigError("field 'preference_order' must have one row per type");
        for (int i = 0; i < I; ++i) {
            const json& row = ord[static_cast<size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != K)
                throw ConfigError("preference_order row " + std::to_string(i) + " must have " +
                                  std::to_string(K) + " entries");
            for (int k = 0; k < K; ++k) p.preference_rank(i, k) = row[static_cast<size_t>(k)].get<int>();
        }
    }

    // Scalar-or-matrix cost entries.
    {
        const json& v = expect(j, "assign_cost");
        p.assign_cost = v.is_number() ? Grid<double>(K, I, v.get<double>())
                                      : expect_real_matrix(v, K, I, "assign_cost");
    }
    {
        const json& v = expect(j, "transfer_cost");
        p.transfer_cost = Cube<double>(K, I);
        if (v.is_number()) {
            double c = v.get<double>();
            for (int k = 0; k < K; ++k)
                for (int l = 0; l < K; ++l)
                    for (int i = 0; i < I; ++i) p.transfer_cost(k, l, i) = k == l ? 0.0 : c;
        } else if (v.is_array() && static_cast<int>(v.size()) == K) {
            for (int k = 0; k < K; ++k)
                for (int l = 0; l < K; ++l) {
                    const json& cell = v[static_cast<size_t>(k)][static_cast<size_t>(l)];
                    if (!cell.is_array() || static_cast<int>(cell.size()) != I)
                        throw ConfigError("transfer_cost must be KxKxI when given as a tensor");
                    for (int i = 0; i < I; ++i)
                        p.transfer_cost(k, l, i) = as_number(cell[static_cast<size_t>(i)], "transfer_cost");
                }
        } else {
            throw ConfigError("field 'transfer_cost' must be a scalar or a KxKxI tensor");
        }
    }
    {
        const json& v = expect(j, "penalty_cost");
        if (v.is_number()) {
            std::string scope = j.value("penalty_scope", "nonprimary");
            if (scope != "nonprimary" && scope != "all")
                throw ConfigError("field 'penalty_scope' must be \"nonprimary\" or \"all\"");
            p.penalty_cost = Grid<double>(K, I, v.get<double>());
            if (scope == "nonprimary") {
                for (int i = 0; i < I; ++i)
                    for (int k = 0; k < K; ++k)
                        if (p.preference_rank(i, k) == 1) p.penalty_cost(k, i) = 0.0;
            }
        } else {
            p.penalty_cost = expect_real_matrix(v, K, I, "penalty_cost");
        }
    }

    p.include_assignment_cost = j.value("include_assignment_cost", true);
    p.joint_admission_cap = j.value("joint_admission_cap", false);
    {
        std::string regime = expect(j, "arrival_regime").get<std::string>();
        if (regime == "capacity_limited")
            p.regime = ArrivalRegime::CapacityLimited;
        else if (regime == "unrestricted")
            p.regime = ArrivalRegime::Unrestricted;
        else
            throw ConfigError("field 'arrival_regime' must be capacity_limited or unrestricted");
    }
    if (j.contains("ward_names")) p.ward_names = j["ward_names"].get<std::vector<std::string>>();
    if (j.contains("type_names")) p.type_names = j["type_names"].get<std::vector<std::string>>();

    p.finalize();

    {
        const json& ds = expect(j, "decisions");
        if (!ds.is_array() || ds.empty())
            throw ConfigError("field 'decisions' must be a nonempty array");
        for (const auto& d : ds) {
            int y;
            if (d.is_number_integer())
                y = d.get<int>();
            else if (d.is_object() && d.contains("max_transfers"))
                y = d["max_transfers"].get<int>();
            else
                throw ConfigError("each decision needs a max_transfers count");
            if (y < 0) throw ConfigError("max_transfers must be nonnegative");
            cfg.decisions.push_back(DecisionLabel{y});
        }
    }

    cfg.hash = fnv1a_hash(config_to_json(cfg).dump());
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

json config_to_json(const AppConfig& cfg) {
    const ModelParams& p = cfg.params;
    json j;
    j["name"] = cfg.name;
    j["num_wards"] = p.num_wards;
    j["num_types"] = p.num_types;
    j["capacities"] = p.capacity;
    if (p.waiting_capacity)
        j["waiting_capacity"] = *p.waiting_capacity;
    else
        j["waiting_capacity"] = "unbounded";
    j["arrival_rates"] = p.arrival_rate;

    auto matrix = [](const Grid<double>& g) {
        json rows = json::array();
        for (int r = 0; r < g.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < g.cols(); ++c) row.push_back(g(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["departure_probs"] = matrix(p.departure_prob);
    {
        json rows = json::array();
        for (int i = 0; i < p.num_types; ++i) {
            json row = json::array();
            for (int k = 0; k < p.num_wards; ++k) row.push_back(p.preference_rank(i, k));
            rows.push_back(std::move(row));
        }
        j["preference_order"] = rows;
    }
    j["assign_cost"] = matrix(p.assign_cost);
    {
        json t = json::array();
        for (int k = 0; k < p.num_wards; ++k) {
            json plane = json::array();
            for (int l = 0; l < p.num_wards; ++l) {
                json cell = json::array();
                for (int i = 0; i < p.num_types; ++i) cell.push_back(p.transfer_cost(k, l, i));
                plane.push_back(std::move(cell));
            }
            t.push_back(std::move(plane));
        }
        j["transfer_cost"] = t;
    }
    j["penalty_cost"] = matrix(p.penalty_cost);
    j["include_assignment_cost"] = p.include_assignment_cost;
    j["joint_admission_cap"] = p.joint_admission_cap;
    j["arrival_regime"] =
        p.regime == ArrivalRegime::CapacityLimited ? "capacity_limited" : "unrestricted";
    if (!p.ward_names.empty()) j["ward_names"] = p.ward_names;
    if (!p.type_names.empty()) j["type_names"] = p.type_names;
    {
        json ds = json::array();
        for (const auto& d : cfg.decisions) ds.push_back(json{{"max_transfers", d.max_transfers}});
        j["decisions"] = ds;
    }
    return j;
}

void save_config(const AppConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file: " + path);
    out << config_to_json(cfg).dump(2) << "\n";
}

uint64_t fnv1a_hash(const std::string& text) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace pas
