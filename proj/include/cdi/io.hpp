#ifndef CDI_IO_HPP
#define CDI_IO_HPP

#include <string>
#include <string_view>

namespace cdi {

// Both throw IoError naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

} // namespace cdi

#endif // CDI_IO_HPP
