#ifndef QINI_VERSION_H_
#define QINI_VERSION_H_

namespace qini {

inline constexpr const char kVersion[] = "0.3.0";

}  // namespace qini

#endif  // QINI_VERSION_H_
