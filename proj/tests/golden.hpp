// Reference Fourier-Jacobi coefficients shared by the unit tests and the acceptance binary.
#pragma once

#include "picard/catalog.hpp"

#include <optional>
#include <string>
#include <vector>

namespace picard::golden {

struct Series {
    std::string form;
    std::string scale;  // stated factor in front of the expansion, "1" if none
    bool up_to_factor;  // only proportionality is claimed
    int through;
    std::vector<std::string> coef;  // coefficient of w^n in SectionElement::parse syntax, "0" for none
};

inline const std::vector<Series>& exact_series() {
    static const std::vector<Series> v = {
        {"phi0", "1", false, 3,
         {"1", "9*Y + 9*Z", "27*Y^2 + 54*Y*Z + 27*Z^2", "36*Y^3 + 81*Y^2*Z + 81*Y*Z^2 + 36*Z^3"}},
        {"zeta", "1", false, 7,
         {"0", "X", "0", "-27*X*Y*Z", "32*X*Y^3 + 32*X*Z^3", "0", "0", "-211*X*Y^6 + 136*X*Y^3*Z^3 + -211*X*Z^6"}},
        {"big_phi0", "1", false, 2, {"0", "Y + -1*Z", "-6*Y^2 + 6*Z^2"}},
        {"gamma12", "1/6", false, 5,
         {"0", "-1*X", "18*X*Y + 18*X*Z", "-54*X*Y^2 + -27*X*Y*Z + -54*X*Z^2", "88*X*Y^3 + 88*X*Z^3",
          "-198*X*Y^4 + 18*X*Y^3*Z + 18*X*Y*Z^3 + -198*X*Z^4"}},
        {"gamma34", "1/6", false, 3,
         {"0", "X", "-6*X*Y + -6*X*Z", "-18*X*Y^2 + 27*X*Y*Z + -18*X*Z^2"}},
        {"d0", "1", false, 4,
         {"0", "Y + -1*Z", "0", "9*Y^3 + -27*Y^2*Z + 27*Y*Z^2 + -9*Z^3", "8*Y^4 + -56*Y^3*Z + 56*Y*Z^3 + -8*Z^4"}},
        {"e33_0", "-1/243", false, 3,
         {"0", "Y + -1*Z", "6*Y^2 + -6*Z^2", "27*Y^3 + 9*Y^2*Z + -9*Y*Z^2 + -27*Z^3"}},
        {"e33_3", "-1/27", false, 5,
         {"0", "0", "0", "Y^3 + -1*Z^3", "0", "-18*Y^4*Z + 18*Y*Z^4"}},
    };
    return v;
}

inline const std::vector<Series>& proportional_series() {
    static const std::vector<Series> v = {
        {"psi1", "1", true, 6,
         {"0", "0", "X^2", "0", "-24*X^2*Y*Z", "34*X^2*Y^3 + 34*X^2*Z^3", "-81*X^2*Y^2*Z^2"}},
        {"psi2", "1", true, 6,
         {"0", "0", "X^2", "0", "-6*X^2*Y*Z", "70*X^2*Y^3 + 70*X^2*Z^3", "-405*X^2*Y^2*Z^2"}},
    };
    return v;
}

inline FJSeries expected(const Series& s) {
    FJSeries f(s.through);
    Cyc scale = Cyc::parse(s.scale);
    // the w^n coefficient is a section of degree n
    for (int n = 0; n <= s.through; ++n)
        if (s.coef[n] != "0") f[n] = SectionElement::parse(s.coef[n], n) * scale;
    return f;
}

// exact comparison through s.through; for up_to_factor entries the factor found, if any
struct Outcome {
    bool pass = false;
    std::optional<Cyc> factor;
    std::string detail;
};

inline Outcome compare(Catalog& cat, const Series& s) {
    Outcome o;
    const FJSeries& have = cat.last(s.form);
    if (have.valid_to() < s.through) {
        o.detail = s.form + " valid only through w^" + std::to_string(have.valid_to());
        return o;
    }
    FJSeries got = have.truncated(s.through);
    FJSeries want = expected(s);
    if (s.up_to_factor) {
        o.factor = proportionality(got, want);
        o.pass = o.factor.has_value() && !o.factor->is_zero() && !got.is_zero();
        o.detail = o.factor ? "ratio " + o.factor->str() : "not proportional";
    } else {
        o.pass = got == want;
        o.detail = o.pass ? "equal through w^" + std::to_string(s.through) : "differs: " + got.pretty();
    }
    return o;
}

}  // namespace picard::golden
