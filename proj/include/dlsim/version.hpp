#ifndef DLSIM_VERSION_HPP
#define DLSIM_VERSION_HPP

namespace dlsim {

inline constexpr const char* kVersion = "1.0.0";

} // namespace dlsim

#endif // DLSIM_VERSION_HPP
