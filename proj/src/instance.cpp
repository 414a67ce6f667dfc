#include "aqopt/instance.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "aqopt/errors.hpp"
#include "aqopt/rng.hpp"

namespace aqopt {

void ProblemInstance::validate() const {
    if (n < 1) throw ValidationError("instance: n must be >= 1");
    if (coupling.rows() != n || coupling.cols() != n)
        throw ValidationError("instance: coupling matrix must be n x n");
    for (int i = 0; i < n; ++i) {
        if (coupling(i, i) != 0.0)
            throw ValidationError("instance: nonzero diagonal at index " + std::to_string(i));
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(coupling(i, j)))
                throw ValidationError("instance: non-finite coupling at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
            if (coupling(i, j) != coupling(j, i))
                throw ValidationError("instance: asymmetric coupling at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
        }
    }
}

double ProblemInstance::classical_cost(uint64_t bits) const {
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
        const double zi = (bits >> i) & 1 ? -1.0 : 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double zj = (bits >> j) & 1 ? -1.0 : 1.0;
            cost += coupling(i, j) * zi * zj;
        }
    }
    return cost;
}

ProblemInstance benchmark8_instance() {
    ProblemInstance inst;
    inst.n = 8;
    inst.coupling.resize(8, 8);
    inst.coupling << 0, 0.526, 0.852, 0.832, 0.718, -0.084, 0.702, 0.609,  //
        0.526, 0, 0.129, -0.951, 0.432, 0.250, 0.490, 0.402,               //
        0.852, 0.129, 0, 0.243, 0.708, -0.648, 0.753, -0.743,              //
        0.832, -0.951, 0.243, 0, -0.320, 0.000, 0.910, -0.002,             //
        0.718, 0.432, 0.708, -0.320, 0, 0.346, -0.801, -0.476,             //
        -0.084, 0.250, -0.648, 0.000, 0.346, 0, 0.149, -0.278,             //
        0.702, 0.490, 0.753, 0.910, -0.801, 0.149, 0, 0.509,               //
        0.609, 0.402, -0.743, -0.002, -0.476, -0.278, 0.509, 0;
    inst.validate();
    return inst;
}

ProblemInstance random_instance(int n, uint64_t seed) {
    if (n < 2) throw ValidationError("random_instance: n must be >= 2");
    ProblemInstance inst;
    inst.n = n;
    inst.coupling = Eigen::MatrixXd::Zero(n, n);
    Xoshiro256StarStar rng(seed);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            inst.coupling(i, j) = v;
            inst.coupling(j, i) = v;
        }
    }
    return inst;
}

std::string instance_to_json(const ProblemInstance& instance) {
    instance.validate();
    nlohmann::json j;
    j["n"] = instance.n;
    auto rows = nlohmann::json::array();
    for (int i = 0; i < instance.n; ++i) {
        auto row = nlohmann::json::array();
        for (int k = 0; k < instance.n; ++k) row.push_back(instance.coupling(i, k));
        rows.push_back(std::move(row));
    }
    j["J"] = std::move(rows);
    return j.dump(2);
}

ProblemInstance instance_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("J"))
        throw ParseError("instance: expected object with fields 'n' and 'J'");

    ProblemInstance inst;
    try {
        inst.n = j.at("n").get<int>();
        const auto& rows = j.at("J");
        if (!rows.is_array() || static_cast<int>(rows.size()) != inst.n)
            throw ParseError("instance: 'J' must be an n-row array");
        inst.coupling.resize(inst.n, inst.n);
        for (int i = 0; i < inst.n; ++i) {
            const auto& row = rows.at(i);
            if (!row.is_array() || static_cast<int>(row.size()) != inst.n)
                throw ParseError("instance: row " + std::to_string(i) + " must have n entries");
            for (int k = 0; k < inst.n; ++k) inst.coupling(i, k) = row.at(k).get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
    inst.validate();
    return inst;
}

ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("instance: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
}

void save_instance(const ProblemInstance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("instance: cannot write " + path);
    out << instance_to_json(instance) << '\n';
}

uint64_t instance_digest(const ProblemInstance& instance) {
    // FNV-1a over the canonical JSON text
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : instance_to_json(instance)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace aqopt
