#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace airyids {

using quad = boost::multiprecision::float128;

// Working precision of the library; everything is templated on Real and defaults to quad.
using real_t = quad;

template <class Real>
inline Real pi_v() { return boost::math::constants::pi<Real>(); }

template <class Real>
inline Real eps_v() { return std::numeric_limits<Real>::epsilon(); }

template <class Real>
inline int sgn(const Real& x) { return (x > 0) - (x < 0); }

template <class Real>
inline bool finite(const Real& x) {
    using std::isfinite;
    using boost::multiprecision::isfinite;
    return isfinite(x);
}

template <class Real>
inline std::string to_string(const Real& x, int digits = std::numeric_limits<Real>::max_digits10) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(digits);
    os << x;
    return os.str();
}

template <class Real>
inline double to_double(const Real& x) { return static_cast<double>(x); }

} // namespace airyids
