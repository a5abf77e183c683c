#ifndef ASPECTRA_VERSION_HPP
#define ASPECTRA_VERSION_HPP

namespace aspectra {

inline constexpr const char* kEngineVersion = "0.1.0";

} // namespace aspectra

#endif
