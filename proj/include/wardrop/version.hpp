#ifndef WARDROP_VERSION_HPP
#define WARDROP_VERSION_HPP

namespace wardrop {

inline constexpr const char* kToolName = "wardrop-sense";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace wardrop

#endif
