#ifndef DSQ_CONSTANTS_HPP
#define DSQ_CONSTANTS_HPP

namespace dsq::constants {

// CODATA 2018 values, SI units.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double epsilon_0 = 8.8541878128e-12; // C^2 J^-1 m^-1
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

}  // namespace dsq::constants

#endif
