#ifndef SPECTRAL_POISSON_IO_HPP
#define SPECTRAL_POISSON_IO_HPP

#include "spectral_poisson/poisson.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sp::io {

using json = nlohmann::ordered_json;

/// Malformed or invalid input; maps to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline json to_json(const exact::Rational& q) { return exact::to_string(q); }

inline exact::Rational rational_from_json(const json& j, const std::string& where) {
    try {
        if (j.is_string()) return exact::parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return exact::Rational(j.get<long>());
    } catch (const std::exception& e) {
        throw InputError(where + ": " + e.what());
    }
    throw InputError(where + ": expected a rational string such as \"-7/3\"");
}

/// Coefficient list of 1, z, z^2, ...; trailing zeros are dropped.
inline json to_json(const exact::LaurentPoly& f) {
    json out = json::array();
    if (f.is_zero()) return out;
    if (*f.min_exponent() < 0) throw std::invalid_argument("to_json: Laurent polynomial has negative exponents");
    for (int k = 0; k <= *f.max_exponent(); ++k) out.push_back(to_json(f.coeff(k)));
    return out;
}

inline exact::LaurentPoly poly_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array of coefficients");
    exact::LaurentPoly f;
    for (std::size_t k = 0; k < j.size(); ++k)
        f.set(static_cast<int>(k), rational_from_json(j[k], where + "[" + std::to_string(k) + "]"));
    return f;
}

inline json to_json(const exact::RatMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

inline json to_json(const exact::RatVector& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(to_json(q));
    return out;
}

inline json to_json(const hitchin::HitchinPair& p) {
    json theta = json::array();
    for (std::size_t i = 0; i < p.rank(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < p.rank(); ++j) row.push_back(to_json(p.theta(i, j)));
        theta.push_back(std::move(row));
    }
    return json{{"splitting", p.bundle.splitting}, {"n", p.n}, {"theta", std::move(theta)}};
}

inline json to_json(const hitchin::HitchinPair& p, const hitchin::PoissonSection& s) {
    json out = to_json(p);
    json sigma = json::array();
    for (const auto& c : s.coeffs) sigma.push_back(to_json(c));
    out["sigma0"] = std::move(sigma);
    return out;
}

inline hitchin::PoissonSection sigma_from_json(const json& j, int n) {
    if (!j.is_array()) throw InputError("sigma0: expected an array of coefficients");
    hitchin::PoissonSection s;
    for (std::size_t k = 0; k < j.size(); ++k)
        s.coeffs.push_back(rational_from_json(j[k], "sigma0[" + std::to_string(k) + "]"));
    try {
        s.validate(n);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return s;
}

inline hitchin::HitchinPair pair_from_json(const json& j) {
    if (!j.is_object()) throw InputError("pair: expected a JSON object");
    for (const char* key : {"splitting", "n", "theta"})
        if (!j.contains(key)) throw InputError(std::string("pair: missing field \"") + key + "\"");
    hitchin::HitchinPair p;
    if (!j["n"].is_number_integer()) throw InputError("pair: n must be an integer");
    p.n = j["n"].get<int>();
    if (!j["splitting"].is_array()) throw InputError("pair: splitting must be an array of integers");
    for (const auto& a : j["splitting"]) {
        if (!a.is_number_integer()) throw InputError("pair: splitting must be an array of integers");
        p.bundle.splitting.push_back(a.get<int>());
    }
    const std::size_t r = p.bundle.rank();
    const json& t = j["theta"];
    if (!t.is_array() || t.size() != r) throw InputError("pair: theta must be an r x r array");
    p.theta = exact::PolyMatrix(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        if (!t[i].is_array() || t[i].size() != r) throw InputError("pair: theta must be an r x r array");
        for (std::size_t k = 0; k < r; ++k)
            p.theta(i, k) = poly_from_json(t[i][k], "theta[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return p;
}

/// {"n", "r", "F0": [[z-power, y-power, "coeff"], ...]}
inline json to_json(const spectral::SpectralCurve& c) {
    json terms = json::array();
    const auto f = c.chart0();
    for (std::size_t y = 0; y < f.size(); ++y)
        for (const auto& [z, q] : f[y].terms()) terms.push_back(json::array({z, y, to_json(q)}));
    return json{{"n", c.n}, {"r", c.r}, {"F0", std::move(terms)}};
}

inline json to_json(const poisson::TheoremReport& rep) {
    return json{{"input", to_json(rep.pair, rep.sigma)},
                {"tangent_dim", rep.tangent_dim},
                {"cotangent_dim", rep.cotangent_dim},
                {"poisson_hitchin", to_json(rep.poisson_hitchin)},
                {"poisson_sheaf_native", to_json(rep.poisson_sheaf_native)},
                {"poisson_sheaf", to_json(rep.poisson_sheaf)},
                {"phi", to_json(rep.phi)},
                {"phi_prime", to_json(rep.phi_prime)},
                {"pairing_hitchin", to_json(rep.pairing_hitchin)},
                {"pairing_sheaf", to_json(rep.pairing_sheaf)},
                {"difference", to_json(rep.difference)},
                {"phi_invertible", rep.phi_invertible},
                {"adjoint_identity", rep.adjoint_identity},
                {"pass", rep.pass}};
}

inline json parse(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

inline void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace sp::io

#endif
