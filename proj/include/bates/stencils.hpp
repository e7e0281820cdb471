#pragma once

namespace bates {

/// Three-point weights on (left, center, right) nodes.
struct StencilWeights {
    double left = 0.0;
    double center = 0.0;
    double right = 0.0;
};

/// First derivative at the center of a nonuniform three-point stencil
/// with left width dl and right width dr.
StencilWeights central_first(double dl, double dr);

/// Second derivative, same node layout as central_first.
StencilWeights central_second(double dl, double dr);

/// One-sided first derivative at v_0 using nodes (v_0, v_1, v_2), with
/// d1 = v_1 - v_0 and d2 = v_2 - v_1.
StencilWeights forward_first_v0(double d1, double d2);

}  // namespace bates
