#pragma once

namespace lorenzflow::detail {

// 4-point Gauss-Legendre rule on [-1, 1].
inline constexpr double kGaussNode[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                         0.8611363115940526};
inline constexpr double kGaussWeight[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                           0.3478548451374538};

}  // namespace lorenzflow::detail
