#pragma once

namespace hamcert {

/// Closed subinterval U on which cone elements are bounded below.
struct Subregion {
    double lo;
    double hi;
};

/// P = { u >= 0 : min_U u >= gamma * sup u }.
struct ConeParams {
    Subregion subregion;
    double gamma;

    /// Requires domain_lo < lo < hi < domain_hi and 0 <= gamma <= 1.
    /// gamma == 0 is accepted and degrades P to the nonnegative cone.
    static ConeParams make(Subregion subregion, double gamma, double domain_lo, double domain_hi);
};

}  // namespace hamcert
