#ifndef OPGF_VERSION_HPP
#define OPGF_VERSION_HPP

namespace opgf
{
inline constexpr const char* version_string = "0.1.0";
}

#endif // OPGF_VERSION_HPP
