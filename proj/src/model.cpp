#include "ekwave/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include "ekwave/quadrature.hpp"

namespace ekwave {

namespace {

double ipow(double base, int e) {
    // exact small-integer powers by repeated squaring
    if (e < 0) return 1.0 / ipow(base, -e);
    double result = 1.0, acc = base;
    for (; e; e >>= 1) {
        if (e & 1) result *= acc;
        acc *= acc;
    }
    return result;
}

std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

// ============================================================
// model::impl
// ============================================================

struct model::impl {
    model_kind kind = model_kind::user_defined;
    std::string name;
    domain_interval dom;

    // bona-sachs
    int q = 2;
    // gross-pitaevskii
    double alpha = 1.0, beta = 1.0;
    // user-defined
    expression p_expr, dp_expr, kappa_expr, dkappa_expr;
    param_map params;
    mutable std::map<std::pair<double, double>, double> antider_memo;
    mutable std::mutex memo_mutex;

    void require_domain(double v) const {
        if (!dom.contains(v)) {
            throw domain_error(name + ": v = " + fmt_num(v) + " outside model domain (" +
                               fmt_num(dom.lo) + ", " + fmt_num(dom.hi) + ")");
        }
    }

    double eval_p(double v) const {
        require_domain(v);
        switch (kind) {
            case model_kind::bona_sachs:
                return -v + ipow(v, q);
            case model_kind::gross_pitaevskii:
                return alpha / (v * v) - beta / (v * v * v);
            case model_kind::user_defined: {
                double r = p_expr.eval(v, params);
                if (!std::isfinite(r))
                    throw domain_error(name + ": p(v) not finite at v = " + fmt_num(v));
                return r;
            }
        }
        return 0.0;
    }

    double eval_dp(double v) const {
        require_domain(v);
        switch (kind) {
            case model_kind::bona_sachs:
                return -1.0 + q * ipow(v, q - 1);
            case model_kind::gross_pitaevskii:
                return -2.0 * alpha / ipow(v, 3) + 3.0 * beta / ipow(v, 4);
            case model_kind::user_defined: {
                double r = dp_expr.eval(v, params);
                if (!std::isfinite(r))
                    throw domain_error(name + ": p'(v) not finite at v = " + fmt_num(v));
                return r;
            }
        }
        return 0.0;
    }

    double eval_kappa(double v) const {
        require_domain(v);
        double k = 1.0;
        switch (kind) {
            case model_kind::bona_sachs:
                k = 1.0;
                break;
            case model_kind::gross_pitaevskii:
                k = 1.0 / (4.0 * ipow(v, 4));
                break;
            case model_kind::user_defined:
                k = kappa_expr.eval(v, params);
                break;
        }
        if (!(k > 0.0) || !std::isfinite(k))
            throw domain_error(name + ": kappa(v) must be positive; got " + fmt_num(k) +
                               " at v = " + fmt_num(v));
        return k;
    }

    double eval_dkappa(double v) const {
        require_domain(v);
        switch (kind) {
            case model_kind::bona_sachs:
                return 0.0;
            case model_kind::gross_pitaevskii:
                return -1.0 / ipow(v, 5);
            case model_kind::user_defined: {
                double r = dkappa_expr.eval(v, params);
                if (!std::isfinite(r))
                    throw domain_error(name + ": kappa'(v) not finite at v = " + fmt_num(v));
                return r;
            }
        }
        return 0.0;
    }

    double antider(double v, double v_ref) const {
        if (v == v_ref) return 0.0;
        require_domain(v);
        require_domain(v_ref);
        switch (kind) {
            case model_kind::bona_sachs: {
                auto prim = [this](double s) { return -s * s / 2.0 + ipow(s, q + 1) / (q + 1.0); };
                return prim(v) - prim(v_ref);
            }
            case model_kind::gross_pitaevskii: {
                auto prim = [this](double s) { return -alpha / s + beta / (2.0 * s * s); };
                return prim(v) - prim(v_ref);
            }
            case model_kind::user_defined: {
                const auto key = std::make_pair(v_ref, v);
                {
                    std::lock_guard<std::mutex> lock(memo_mutex);
                    auto it = antider_memo.find(key);
                    if (it != antider_memo.end()) return it->second;
                }
                auto f = [this](double s) { return eval_p(s); };
                const double lo = std::min(v_ref, v), hi = std::max(v_ref, v);
                auto qr = quadrature::integrate_dyadic(f, lo, hi, 1e-12);
                const double value = (v >= v_ref) ? qr.value : -qr.value;
                std::lock_guard<std::mutex> lock(memo_mutex);
                antider_memo.emplace(key, value);
                return value;
            }
        }
        return 0.0;
    }
};

// ============================================================
// Constructors
// ============================================================

model model::bona_sachs(int q) {
    if (q < 2) throw config_error("bona-sachs: q must be an integer >= 2");
    auto i = std::make_shared<impl>();
    i->kind = model_kind::bona_sachs;
    i->name = "bona-sachs";
    i->q = q;
    return model(std::move(i));
}

model model::gross_pitaevskii(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw config_error("gross-pitaevskii: alpha and beta must be > 0");
    auto i = std::make_shared<impl>();
    i->kind = model_kind::gross_pitaevskii;
    i->name = "gross-pitaevskii";
    i->alpha = alpha;
    i->beta = beta;
    i->dom.lo = 0.0;  // p and kappa are singular at v = 0
    return model(std::move(i));
}

model model::user_defined(const std::string& p_src, const std::string& kappa_src,
                          const param_map& params) {
    auto i = std::make_shared<impl>();
    i->kind = model_kind::user_defined;
    i->name = "user-defined";
    i->p_expr = expression::parse(p_src);
    i->kappa_expr = expression::parse(kappa_src);
    i->dp_expr = i->p_expr.derivative();
    i->dkappa_expr = i->kappa_expr.derivative();
    i->params = params;

    auto referenced = i->p_expr.referenced_params();
    auto from_kappa = i->kappa_expr.referenced_params();
    referenced.insert(from_kappa.begin(), from_kappa.end());
    for (const auto& name : referenced) {
        auto it = params.find(name);
        if (it == params.end())
            throw config_error("unknown identifier '" + name + "' (no params." + name +
                               " value supplied)");
        if (!(it->second > 0.0))
            throw config_error("parameter '" + name + "' must be positive, got " +
                               fmt_num(it->second));
    }
    return model(std::move(i));
}

model model::from_selector(const std::string& selector) {
    std::string name = selector;
    std::string args;
    if (auto colon = selector.find(':'); colon != std::string::npos) {
        name = selector.substr(0, colon);
        args = selector.substr(colon + 1);
    }

    param_map kv;
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw config_error("model selector: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        char* end = nullptr;
        double x = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0')
            throw config_error("model selector: bad numeric value '" + val + "' for " + key);
        kv[key] = x;
    }

    auto take = [&kv](const std::string& key, double fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        double v = it->second;
        kv.erase(it);
        return v;
    };

    model result = [&]() {
        if (name == "bona-sachs") {
            double qd = take("q", 2.0);
            int q = static_cast<int>(qd);
            if (static_cast<double>(q) != qd)
                throw config_error("bona-sachs: q must be an integer, got " + fmt_num(qd));
            return bona_sachs(q);
        }
        if (name == "gross-pitaevskii")
            return gross_pitaevskii(take("alpha", 1.0), take("beta", 1.0));
        throw config_error("unknown model '" + name +
                           "' (available: bona-sachs, gross-pitaevskii)");
    }();
    if (!kv.empty())
        throw config_error("model selector: unknown parameter '" + kv.begin()->first + "' for " +
                           name);
    return result;
}

model model::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open model file '" + path + "'");

    std::string p_src, kappa_src;
    bool have_p = false, have_kappa = false;
    param_map params;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "p") {
            p_src = value;
            have_p = true;
        } else if (key == "kappa") {
            kappa_src = value;
            have_kappa = true;
        } else if (key.rfind("params.", 0) == 0) {
            const std::string pname = key.substr(7);
            char* end = nullptr;
            double x = std::strtod(value.c_str(), &end);
            if (end == value.c_str() || *end != '\0')
                throw config_error(path + ":" + std::to_string(lineno) + ": bad number '" +
                                   value + "'");
            params[pname] = x;
        } else {
            throw config_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                               "'");
        }
    }
    if (!have_p || !have_kappa)
        throw config_error(path + ": model file must define both 'p' and 'kappa'");

    try {
        return user_defined(p_src, kappa_src, params);
    } catch (const parse_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

// ============================================================
// Accessors
// ============================================================

model_kind model::kind() const { return impl_->kind; }
const std::string& model::name() const { return impl_->name; }
const domain_interval& model::domain() const { return impl_->dom; }

std::string model::p_formula() const {
    switch (impl_->kind) {
        case model_kind::bona_sachs:
            return "-v + v^" + std::to_string(impl_->q);
        case model_kind::gross_pitaevskii:
            return fmt_num(impl_->alpha) + "/v^2 - " + fmt_num(impl_->beta) + "/v^3";
        case model_kind::user_defined:
            return impl_->p_expr.to_string();
    }
    return "";
}

std::string model::kappa_formula() const {
    switch (impl_->kind) {
        case model_kind::bona_sachs:
            return "1";
        case model_kind::gross_pitaevskii:
            return "1/(4*v^4)";
        case model_kind::user_defined:
            return impl_->kappa_expr.to_string();
    }
    return "";
}

double model::p(double v) const { return impl_->eval_p(v); }
double model::p_prime(double v) const { return impl_->eval_dp(v); }
double model::kappa(double v) const { return impl_->eval_kappa(v); }
double model::kappa_prime(double v) const { return impl_->eval_dkappa(v); }
double model::antiderivative_diff(double v, double v_ref) const {
    return impl_->antider(v, v_ref);
}

// ============================================================
// Effective potential
// ============================================================

potential_values potential(const model& m, const wave_parameters& params, double v) {
    const double dv = v - params.v_star;
    potential_values out;
    out.F = m.antiderivative_diff(v, params.v_star) - m.p(params.v_star) * dv +
            0.5 * params.c * params.c * dv * dv;
    out.F_v = m.p(v) - m.p(params.v_star) + params.c * params.c * dv;
    out.F_c = params.c * dv * dv;
    return out;
}

}  // namespace ekwave
