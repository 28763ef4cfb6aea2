#ifndef INCNLU_IO_HPP
#define INCNLU_IO_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace incnlu {

// Splits on runs of ASCII whitespace; never yields empty pieces.
std::vector<std::string> split_ws(std::string_view s);

// Splits on every occurrence of `sep`, keeping empty pieces.
std::vector<std::string> split_char(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// ASCII-only lowercasing; multi-byte UTF-8 sequences pass through untouched.
std::string to_lower(std::string_view s);

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory and renames into place, so
// readers never observe a half-written file.
void atomic_write_file(const std::string& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace incnlu

#endif
