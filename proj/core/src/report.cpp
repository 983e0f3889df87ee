#include "keplerkit/report.hpp"

#include <cstdio>
#include <fstream>

#include "keplerkit/error.hpp"

namespace keplerkit::report {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_rec(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad1(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += pad1 + json(it.key()).dump() + ": ";
            dump_rec(it.value(), out, indent, depth + 1);
            if (i + 1 < j.size()) out += ",";
            out += "\n";
        }
        out += pad + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += pad1;
            dump_rec(j[i], out, indent, depth + 1);
            if (i + 1 < j.size()) out += ",";
            out += "\n";
        }
        out += pad + "]";
        return;
    }
    case json::value_t::number_float:
        out += format_double(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

} // namespace

std::string dump_17g(const json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

json to_json(const quad::Functionals& fn) {
    json j;
    j["vol"] = fn.vol;
    j["action"] = fn.action;
    j["period"] = fn.period;
    j["period_tau"] = fn.period_tau;
    j["v_tilde"] = fn.v_tilde;
    j["a_tilde"] = fn.a_tilde;
    j["t_tilde"] = fn.t_tilde;
    j["e_f"] = fn.e_f;
    j["d_f"] = fn.d_f;
    j["vol_err"] = fn.vol_err;
    j["action_err"] = fn.action_err;
    j["period_err"] = fn.period_err;
    j["period_tau_err"] = fn.period_tau_err;
    j["v_tilde_err"] = fn.v_tilde_err;
    j["a_tilde_err"] = fn.a_tilde_err;
    j["t_tilde_err"] = fn.t_tilde_err;
    j["e_f_err"] = fn.e_f_err;
    j["d_f_err"] = fn.d_f_err;
    if (fn.fd_partials) j["fd_partials"] = true;
    return j;
}

json to_json(const criteria::CriteriaReport& rep) {
    json j;
    j["omega"] = rep.omega;
    j["h"] = rep.h;
    j["eps"] = rep.eps;
    j["system"] = rep.system;
    if (rep.pyramid_n > 0) j["n"] = rep.pyramid_n;
    if (rep.omega_flipped) j["omega_flipped"] = true;
    j["e"] = rep.e;
    j["C"] = rep.C;
    j["functionals"] = to_json(rep.fn);
    j["lhs"] = rep.lhs;
    j["lhs_err"] = rep.lhs_err;
    j["rhs"] = rep.rhs;
    j["rhs_err"] = rep.rhs_err;
    j["margin"] = rep.margin;
    j["verdict"] = criteria::to_string(rep.verdict);
    j["stability"] = criteria::to_string(rep.stability);
    return j;
}

json to_json(const quad::SelfTestReport& rep) {
    json j;
    j["all_pass"] = rep.all_pass;
    json cases = json::array();
    for (const auto& c : rep.cases) {
        json cj;
        cj["name"] = c.name;
        cj["computed"] = c.computed;
        cj["expected"] = c.expected;
        cj["abs_err"] = c.abs_err;
        cj["pass"] = c.pass;
        cases.push_back(cj);
    }
    j["cases"] = cases;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::IoError, "cannot open for writing: " + path);
    os << content;
    if (!os) fail(ErrorKind::IoError, "write failed: " + path);
}

} // namespace keplerkit::report
