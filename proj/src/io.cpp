#include "nlss/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace nlss {

namespace {

void put_string(std::string& out, const std::string& s) {
    // nlohmann's escaping, without going through its number formatting
    out += Json(s).dump();
}

void write(std::string& out, const Json& j, int indent, int level) {
    const std::string pad = indent >= 0 ? std::string(std::size_t(indent) * (level + 1), ' ') : "";
    const std::string pad_end = indent >= 0 ? std::string(std::size_t(indent) * level, ' ') : "";
    const char* nl = indent >= 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += std::string(",") + nl;
                first = false;
                out += pad;
                put_string(out, it.key());
                out += indent >= 0 ? ": " : ":";
                write(out, it.value(), indent, level + 1);
            }
            out += nl + pad_end + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // numeric arrays stay on one line
            bool flat = true;
            for (const auto& e : j)
                if (e.is_structured()) flat = false;
            out += "[";
            if (!flat) out += nl;
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat ? ", " : std::string(",") + nl;
                first = false;
                if (!flat) out += pad;
                write(out, e, indent, level + 1);
            }
            if (!flat) out += nl + pad_end;
            out += "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default: out += j.dump();
    }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    write(out, j, indent, 0);
    return out;
}

Json to_json(const CPair& w) {
    return Json::array({Json::array({w[0].real(), w[0].imag()}), Json::array({w[1].real(), w[1].imag()})});
}

Json to_json(const Mat2& M) { return Json::array({Json::array({M[0][0], M[0][1]}), Json::array({M[1][0], M[1][1]})}); }

Json params_json(FormTag tag, const FormParams& q) {
    Json j = Json::object();
    switch (tag) {
        case FormTag::NLS1: j["alpha"] = q.alpha, j["beta"] = q.beta; break;
        case FormTag::NLS2: j["alpha"] = q.alpha, j["beta"] = q.beta, j["sigma"] = q.sigma; break;
        case FormTag::NLS3: j["alpha1"] = q.alpha1, j["alpha2"] = q.alpha2, j["r"] = q.r; break;
        case FormTag::NLS4:
            j["alpha1"] = q.alpha1, j["alpha2"] = q.alpha2, j["alpha3"] = q.alpha3, j["r"] = q.r;
            break;
        case FormTag::NLS5:
            j["alpha1"] = q.alpha1, j["alpha2"] = q.alpha2, j["alpha3"] = q.alpha3, j["r"] = q.r, j["eta"] = q.eta;
            break;
        case FormTag::CO: j["kappa"] = q.kappa, j["gamma"] = q.gamma; break;
        case FormTag::Custom: break;
    }
    return j;
}

Json system_json(const SystemSpec& s) {
    Json j;
    const GForm g = s.nonlinearity();
    j["standard_form"] = to_string(g.tag());
    j["params"] = params_json(g.tag(), g.params());
    j["d"] = s.d;
    j["p"] = s.p;
    j["n"] = Json::array({s.n[0], s.n[1]});
    if (s.lambdas) {
        Json l = Json::array();
        for (double x : *s.lambdas) l.push_back(x);
        j["lambdas"] = l;
    } else {
        j["lambdas"] = nullptr;
    }
    return j;
}

FormParams params_from_json(FormTag tag, const Json& j) {
    if (!j.is_object()) throw ValidationError("params must be an object");
    FormParams q;
    auto need = [&](const char* k, double& dst) {
        if (!j.contains(k) || !j[k].is_number()) throw ValidationError(std::string("missing numeric parameter '") + k + "'");
        dst = j[k].get<double>();
    };
    switch (tag) {
        case FormTag::NLS1: need("alpha", q.alpha), need("beta", q.beta); break;
        case FormTag::NLS2: need("alpha", q.alpha), need("beta", q.beta), need("sigma", q.sigma); break;
        case FormTag::NLS3: need("alpha1", q.alpha1), need("alpha2", q.alpha2), need("r", q.r); break;
        case FormTag::NLS4: need("alpha1", q.alpha1), need("alpha2", q.alpha2), need("alpha3", q.alpha3), need("r", q.r); break;
        case FormTag::NLS5:
            need("alpha1", q.alpha1), need("alpha2", q.alpha2), need("alpha3", q.alpha3), need("r", q.r), need("eta", q.eta);
            break;
        case FormTag::CO: need("kappa", q.kappa), need("gamma", q.gamma); break;
        case FormTag::Custom: throw ValidationError("custom systems are given by lambdas");
    }
    return q;
}

namespace {

GForm standard_form_of(FormTag tag, const FormParams& q) {
    switch (tag) {
        case FormTag::NLS1: return GForm::nls1(q.alpha, q.beta);
        case FormTag::NLS2: return GForm::nls2(q.alpha, q.beta, q.sigma);
        case FormTag::NLS3: return GForm::nls3(q.alpha1, q.alpha2, q.r);
        case FormTag::NLS4: return GForm::nls4(q.alpha1, q.alpha2, q.alpha3, q.r);
        case FormTag::NLS5: return GForm::nls5(q.alpha1, q.alpha2, q.alpha3, q.r, q.eta);
        case FormTag::CO: return GForm::colin_ohta(q.kappa, q.gamma);
        case FormTag::Custom: break;
    }
    throw ValidationError("custom systems are given by lambdas");
}

}  // namespace

SystemSpec system_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("system must be a JSON object");
    int d = 1;
    if (j.contains("d")) {
        if (!j["d"].is_number_integer()) throw ValidationError("'d' must be an integer");
        d = j["d"].get<int>();
    }
    SystemSpec s;
    const char* form_key = j.contains("standard_form") ? "standard_form" : "form";
    const bool tagged = j.contains(form_key) && !(j[form_key].is_string() && j[form_key] == "Custom");
    if (tagged) {
        if (!j[form_key].is_string()) throw ValidationError("'standard_form' must be a string");
        const FormTag tag = form_tag_from_string(j[form_key].get<std::string>());
        const FormParams q = params_from_json(tag, j.contains("params") ? j["params"] : j);
        s = SystemSpec::from_form(standard_form_of(tag, q), d);
    } else if (j.contains("lambdas") && !j["lambdas"].is_null()) {
        const auto& a = j["lambdas"];
        if (!a.is_array() || a.size() != 12) throw ValidationError("'lambdas' must be an array of 12 numbers");
        Lambdas l{};
        for (int i = 0; i < 12; ++i) {
            if (!a[i].is_number()) throw ValidationError("'lambdas' entries must be numbers");
            l[i] = a[i].get<double>();
        }
        s = SystemSpec::from_lambdas(l, d);
        if (j.contains("p")) {
            if (!j["p"].is_number() || j["p"].get<double>() != 4) throw ValidationError("coefficient systems are cubic: p = 4");
        }
        if (j.contains("n")) {
            const auto& n = j["n"];
            if (!n.is_array() || n.size() != 2 || !n[0].is_number_integer() || !n[1].is_number_integer())
                throw ValidationError("'n' must be two integers");
            s.n = {n[0].get<int>(), n[1].get<int>()};
        }
    } else {
        throw ValidationError("system needs 'standard_form' or 'lambdas'");
    }
    s.validate();
    return s;
}

SystemSpec load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open system file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("bad JSON in " + path + ": " + e.what());
    }
    return system_from_json(j);
}

}  // namespace nlss
