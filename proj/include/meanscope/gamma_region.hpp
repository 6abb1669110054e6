#pragma once

// The parameter region Gamma in the (a,b) plane on which
// u_{a,b}(t) = (b/a) (t^a - 1)/(t^b - 1) is a normalized operator monotone
// function. Membership is the union of a strip, a box with the origin
// removed, and the punctured diagonal, with all inequalities taken exactly
// as written (closed except 0 < a - b).

namespace meanscope {

inline bool gamma_contains(double a, double b) {
    const bool strip =
        (a - b > 0.0) && (a - b <= 1.0) && (a <= 2.0) && (a >= -1.0) &&
        (b >= -2.0) && (b <= 1.0);
    const bool box = (a >= 0.0) && (a <= 1.0) && (b >= -1.0) && (b <= 0.0) &&
                     !(a == 0.0 && b == 0.0);
    const bool diagonal = (a == b) && (a != 0.0);
    return strip || box || diagonal;
}

}  // namespace meanscope
