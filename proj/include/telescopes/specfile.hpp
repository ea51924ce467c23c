#ifndef TELESCOPES_SPECFILE_HPP
#define TELESCOPES_SPECFILE_HPP

#include <string>
#include <string_view>

#include "telescopes/telescope.hpp"

namespace telescopes {

// Telescope spec file: one `key = value` per line, '#' starts a comment.
// kind is alt, el, psl or embed; alt-corrupted and toy build the negative
// controls. group is alt5, alt6, sl2_5 or a path (relative to the file) of
// permutation generators.
struct SpecFile {
  std::string kind;
  std::uint32_t d = 0;
  std::uint32_t r = 0;
  unsigned q = 0;
  std::size_t max_level = 0;  // 0: default of the kind
  std::string group;
  std::string base_dir;
};

// Throws ParseError (byte offset into text) on syntax errors, unknown keys
// or missing required keys.
SpecFile parse_spec_file(std::string_view text);
// Throws std::runtime_error when the file cannot be read.
SpecFile load_spec_file(const std::string& path);
ModelPtr build_model(const SpecFile& spec);

}  // namespace telescopes

#endif
