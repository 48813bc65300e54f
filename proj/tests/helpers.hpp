#pragma once

#include <rurcert/io.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(RURCERT_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline rurcert::PolySystem load_system(const std::string& name) {
    return rurcert::parse_system(slurp(data_path(name)));
}

inline rurcert::ApproxRootSet load_roots(const std::string& name,
                                         unsigned prec = rurcert::kDefaultPrecisionBits) {
    return rurcert::parse_roots(slurp(data_path(name)), prec);
}

inline rurcert::Rational Q(long num, long den = 1) {
    rurcert::Rational r(num, den);
    r.canonicalize();
    return r;
}

// Univariate polynomial from ascending rational coefficients.
inline rurcert::UniPoly<rurcert::Rational> upoly(std::vector<rurcert::Rational> c) {
    return rurcert::UniPoly<rurcert::Rational>(std::move(c));
}

}  // namespace testutil
