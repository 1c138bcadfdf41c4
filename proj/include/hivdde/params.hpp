#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hivdde {

/// Raised when a text input (parameter file, dataset) is malformed.
/// Carries the offending line number in the message.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rate constants of the delayed epidemic model with education campaigns.
///
/// Units: populations in millions, time in years. The transmission rates
/// beta0..beta2 are per million per year (mass-action incidence), the
/// response rates gamma0..gamma2 are per unit information per year, and
/// u is the intracellular delay in years.
struct ModelParams {
    double B = 0.0;       ///< recruitment rate into the general susceptible class
    double mu = 0.0;      ///< natural death rate, shared by every class
    double d = 0.0;       ///< disease-induced death rate
    double gamma0 = 0.0;  ///< response rate toward the removed class
    double gamma1 = 0.0;  ///< response rate toward abstinence/faithfulness
    double gamma2 = 0.0;  ///< response rate toward condom use
    double beta0 = 0.0;   ///< transmission rate of the general susceptible class
    double beta1 = 0.0;   ///< transmission rate of the S1 class
    double beta2 = 0.0;   ///< transmission rate of the S2 class
    double q = 0.0;       ///< information growth rate per infective
    double eta = 0.0;     ///< information decay rate
    double u = 0.0;       ///< intracellular delay (>= 0)
};

/// Scalar quantities derived from the rate constants.
struct DerivedQuantities {
    double gamma_total;  ///< gamma0 + gamma1 + gamma2
    double b0u;          ///< beta0 + (q/eta) * gamma_total
    double tau;          ///< q / eta, effective education dissemination rate
    double D0;           ///< critical death rate mu*(mu+d)/B
    double R0;           ///< basic reproduction number B*beta0 / (mu*(mu+d))
    double rel_weight;   ///< (beta1*gamma1 + beta2*gamma2) / gamma_total
};

inline void validate(const ModelParams& p) {
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("invalid model parameters: " + what);
    };
    if (!(p.B > 0.0)) fail("B must be > 0");
    if (!(p.mu > 0.0)) fail("mu must be > 0");
    if (!(p.d > 0.0)) fail("d must be > 0");
    if (!(p.eta > 0.0)) fail("eta must be > 0");
    if (!(p.q > 0.0)) fail("q must be > 0");
    if (p.gamma0 < 0.0 || p.gamma1 < 0.0 || p.gamma2 < 0.0) fail("gamma_j must be >= 0");
    if (!(p.gamma0 + p.gamma1 + p.gamma2 > 0.0)) fail("gamma0+gamma1+gamma2 must be > 0");
    if (!(p.beta0 > 0.0 && p.beta1 > 0.0 && p.beta2 > 0.0)) fail("beta_j must be > 0");
    if (!(p.u >= 0.0)) fail("u must be >= 0");
}

inline DerivedQuantities derived(const ModelParams& p) {
    DerivedQuantities dq{};
    dq.gamma_total = p.gamma0 + p.gamma1 + p.gamma2;
    dq.tau = p.q / p.eta;
    dq.b0u = p.beta0 + dq.tau * dq.gamma_total;
    dq.D0 = p.mu * (p.mu + p.d) / p.B;
    dq.R0 = p.B * p.beta0 / (p.mu * (p.mu + p.d));
    dq.rel_weight = (p.beta1 * p.gamma1 + p.beta2 * p.gamma2) / dq.gamma_total;
    return dq;
}

/// Fixed parameters of the Uganda study (all but the four fitted rates).
/// The transmission and information rates are left at zero; merge a fitted
/// row on top or fill them from a parameter file.
inline ModelParams uganda_fixed_params() {
    ModelParams p;
    p.B = 0.55;
    p.mu = 0.01176;
    p.d = 0.14;
    p.gamma1 = 0.1;
    p.gamma2 = 0.8;
    return p;
}

/// Fitted parameter rows for the Uganda data, keyed by the delay in years.
/// Valid delays: 0, 3, 6, 9, 12. beta1/beta2 follow the 0.05/0.40 ties.
inline ModelParams uganda_fitted_params(double delay_years) {
    struct Row {
        double u, beta0, eta, gamma0, q;
    };
    static constexpr Row rows[] = {
        {0.0, 0.025801, 0.041590, 0.249756, 0.087683},
        {3.0, 0.023290, 0.049984, 0.252212, 0.094138},
        {6.0, 0.021509, 0.055251, 0.252445, 0.099323},
        {9.0, 0.020364, 0.061623, 0.252566, 0.105675},
        {12.0, 0.019605, 0.063318, 0.253071, 0.107944},
    };
    for (const Row& r : rows) {
        if (r.u == delay_years) {
            ModelParams p = uganda_fixed_params();
            p.beta0 = r.beta0;
            p.beta1 = 0.05 * r.beta0;
            p.beta2 = 0.40 * r.beta0;
            p.eta = r.eta;
            p.gamma0 = r.gamma0;
            p.q = r.q;
            p.u = r.u;
            return p;
        }
    }
    throw std::invalid_argument("no fitted parameter row for delay " + std::to_string(delay_years));
}

namespace detail {

inline double* param_field(ModelParams& p, const std::string& key) {
    static const std::map<std::string, double ModelParams::*> fields = {
        {"B", &ModelParams::B},           {"mu", &ModelParams::mu},
        {"d", &ModelParams::d},           {"gamma0", &ModelParams::gamma0},
        {"gamma1", &ModelParams::gamma1}, {"gamma2", &ModelParams::gamma2},
        {"beta0", &ModelParams::beta0},   {"beta1", &ModelParams::beta1},
        {"beta2", &ModelParams::beta2},   {"q", &ModelParams::q},
        {"eta", &ModelParams::eta},       {"u", &ModelParams::u},
    };
    auto it = fields.find(key);
    return it == fields.end() ? nullptr : &(p.*(it->second));
}

inline std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parses a flat `name = value` parameter file on top of a base parameter
/// set. Lines starting with `#` (or trailing `#` comments) are ignored.
inline ModelParams parse_params(std::istream& in, ModelParams base = {}) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("parameter file line " + std::to_string(lineno) + ": expected name = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        double* field = detail::param_field(base, key);
        if (!field)
            throw ParseError("parameter file line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        try {
            std::size_t pos = 0;
            *field = std::stod(val, &pos);
            if (pos != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw ParseError("parameter file line " + std::to_string(lineno) + ": bad number '" + val + "'");
        }
    }
    return base;
}

inline ModelParams load_params(const std::filesystem::path& path, ModelParams base = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file: " + path.string());
    return parse_params(in, base);
}

inline void save_params(std::ostream& out, const ModelParams& p) {
    auto w = [&out](const char* k, double v) {
        std::ostringstream line;
        line.precision(15);
        line << k << " = " << v << '\n';
        out << line.str();
    };
    w("B", p.B);
    w("mu", p.mu);
    w("d", p.d);
    w("gamma0", p.gamma0);
    w("gamma1", p.gamma1);
    w("gamma2", p.gamma2);
    w("beta0", p.beta0);
    w("beta1", p.beta1);
    w("beta2", p.beta2);
    w("q", p.q);
    w("eta", p.eta);
    w("u", p.u);
}

inline void save_params(const std::filesystem::path& path, const ModelParams& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write parameter file: " + path.string());
    save_params(out, p);
}

}  // namespace hivdde
