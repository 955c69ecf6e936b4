#pragma once

#include "fatou/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace fatou {

// Extended-precision real type for the numeric layer. Expression templates are
// disabled so lambdas returning Real interoperate with generic numeric code
// (quadrature, ODE steppers). Precision is set at runtime; default 50 digits.
using Real =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

inline void set_working_digits(unsigned digits10)
{
    Real::default_precision(digits10);
}

inline unsigned working_digits()
{
    return Real::default_precision();
}

// l_k iterates: l_0 = x, l_1 = -1/log x, l_2 = l(l(x)).
Real eval_ell(const Real& x, int k);

} // namespace fatou
