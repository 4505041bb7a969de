#include "liouville/jsonio.hpp"

#include <cstdio>
#include <sstream>

namespace liouville {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void emit(const nlohmann::json& j, std::string& out) {
    using value_t = nlohmann::json::value_t;
    switch (j.type()) {
        case value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) { // nlohmann keeps keys sorted
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(it.key()).dump();
                out += ':';
                emit(it.value(), out);
            }
            out += '}';
            break;
        }
        case value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                emit(v, out);
            }
            out += ']';
            break;
        }
        case value_t::number_float:
            out += format_double(j.get<double>());
            break;
        default:
            out += j.dump();
    }
}

} // namespace

std::string emit_canonical(const nlohmann::json& j) {
    std::string out;
    emit(j, out);
    out += '\n';
    return out;
}

nlohmann::json to_json(const CriticalPointReport& rep) {
    nlohmann::json j;
    j["verdict"] = verdict_name(rep.verdict);
    j["residual"] = rep.residual;
    j["iterations"] = rep.iterations;
    nlohmann::json pts = nlohmann::json::array();
    for (const Complex& z : rep.config.points)
        pts.push_back({{"x", z.real()}, {"y", z.imag()}});
    j["points"] = pts;
    if (rep.verdict == Verdict::polygon) {
        j["radius"] = rep.polygon_r;
        j["theta0"] = rep.polygon_theta0;
        j["radius_error"] = rep.radius_error.value();
    }
    return j;
}

nlohmann::json to_json(const SearchSummary& s) {
    nlohmann::json j;
    j["restarts"] = s.restarts;
    j["converged"] = s.converged;
    j["seed"] = s.seed;
    nlohmann::json cls = nlohmann::json::array();
    for (const auto& c : s.distinct_classes) cls.push_back(to_json(c));
    j["distinct_classes"] = cls;
    return j;
}

nlohmann::json to_json(const BranchPoint& bp) {
    return {{"lambda", bp.lambda},
            {"branch", branch_name(bp.branch)},
            {"Lambda", bp.Lambda},
            {"mass", bp.mass},
            {"sup_norm", bp.sup_norm}};
}

nlohmann::json to_json(const PeakReport& pr) {
    nlohmann::json j;
    nlohmann::json pk = nlohmann::json::array();
    for (const Peak& p : pr.peaks)
        pk.push_back({{"r", p.r}, {"theta", p.theta}, {"height", p.height}});
    j["peaks"] = pk;
    j["mass"] = pr.mass;
    j["residual_norm"] = pr.residual_norm;
    return j;
}

std::string field_to_csv(const Field2D& f) {
    std::string out = "r,theta,u\n";
    out += "0," + format_double(0.0) + "," + format_double(f.origin) + "\n";
    const PolarGrid& g = *f.grid;
    for (int i = 0; i < g.Nr; ++i)
        for (int j = 0; j < g.Nt; ++j) {
            out += format_double(g.r[i]);
            out += ',';
            out += format_double(g.theta(j));
            out += ',';
            out += format_double(f.values(i, j));
            out += '\n';
        }
    return out;
}

} // namespace liouville
