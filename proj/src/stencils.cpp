#include "bates/stencils.hpp"

#include "bates/errors.hpp"

namespace bates {

namespace {
void check_widths(double a, double b, const char* who) {
    if (!(a > 0.0) || !(b > 0.0)) throw ParameterError(std::string(who) + ": widths must be > 0");
}
}  // namespace

StencilWeights central_first(double dl, double dr) {
    check_widths(dl, dr, "central_first");
    return {-dr / (dl * (dl + dr)), (dr - dl) / (dl * dr), dl / ((dl + dr) * dr)};
}

StencilWeights central_second(double dl, double dr) {
    check_widths(dl, dr, "central_second");
    return {2.0 / (dl * (dl + dr)), -2.0 / (dl * dr), 2.0 / ((dl + dr) * dr)};
}

StencilWeights forward_first_v0(double d1, double d2) {
    check_widths(d1, d2, "forward_first_v0");
    return {-(2.0 * d1 + d2) / (d1 * (d1 + d2)), (d1 + d2) / (d1 * d2), -d1 / ((d1 + d2) * d2)};
}

}  // namespace bates
