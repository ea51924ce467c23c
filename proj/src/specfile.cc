#include "telescopes/specfile.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "telescopes/instances.hpp"

namespace telescopes {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_number(std::string_view v, std::size_t pos) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw ParseError("expected a non-negative integer, got '" + std::string(v) + "'", pos);
  return x;
}

}  // namespace

SpecFile parse_spec_file(std::string_view text) {
  SpecFile s;
  std::set<std::string> seen;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t end = text.find('\n', line_start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(line_start, end - line_start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t pos = line_start;
    if (!trim(line).empty()) {
      std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", pos);
      std::string key(trim(line.substr(0, eq)));
      std::string_view value = trim(line.substr(eq + 1));
      std::size_t vpos = pos + eq + 1;
      if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", pos);
      if (value.empty()) throw ParseError("empty value for '" + key + "'", vpos);
      if (key == "kind") {
        s.kind = value;
        static const std::set<std::string> kinds{"alt", "el", "psl", "embed", "alt-corrupted",
                                                 "toy"};
        if (!kinds.count(s.kind)) throw ParseError("unknown kind '" + s.kind + "'", vpos);
      } else if (key == "d") {
        s.d = static_cast<std::uint32_t>(parse_number(value, vpos));
      } else if (key == "r") {
        s.r = static_cast<std::uint32_t>(parse_number(value, vpos));
      } else if (key == "q") {
        s.q = static_cast<unsigned>(parse_number(value, vpos));
      } else if (key == "max_level") {
        s.max_level = parse_number(value, vpos);
        if (s.max_level == 0) throw ParseError("max_level must be positive", vpos);
      } else if (key == "group") {
        s.group = value;
      } else {
        throw ParseError("unknown key '" + key + "'", pos);
      }
    }
    if (end == text.size()) break;
    line_start = end + 1;
  }
  if (s.kind.empty()) throw ParseError("missing key 'kind'", text.size());
  auto need = [&](bool ok, const char* key) {
    if (!ok) throw ParseError(std::string("missing key '") + key + "' for kind " + s.kind,
                              text.size());
  };
  if (s.kind == "alt" || s.kind == "alt-corrupted") {
    need(s.d != 0, "d");
    need(s.r != 0, "r");
  } else if (s.kind == "el" || s.kind == "psl") {
    need(s.d != 0, "d");
    need(s.q != 0, "q");
  } else if (s.kind == "embed") {
    need(!s.group.empty(), "group");
  }
  return s;
}

SpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  SpecFile s = parse_spec_file(ss.str());
  s.base_dir = std::filesystem::path(path).parent_path().string();
  return s;
}

ModelPtr build_model(const SpecFile& s) {
  if (s.kind == "alt" || s.kind == "alt-corrupted") {
    AltParams p;
    p.d = s.d;
    p.r = s.r;
    if (s.max_level) p.max_level = s.max_level;
    if (s.kind == "alt") return build_alt(p);
    return build_alt_corrupted(p);
  }
  if (s.kind == "el") return build_el(s.d, s.q, s.max_level ? s.max_level : 4);
  if (s.kind == "psl") return build_psl(s.d, s.q, s.max_level ? s.max_level : 4);
  if (s.kind == "toy") return build_toy(s.max_level ? s.max_level : 6);
  if (s.kind == "embed") {
    static const std::set<std::string> builtins{"alt5", "alt6", "sl2_5"};
    FiniteGroup g = [&] {
      if (builtins.count(s.group)) return FiniteGroup::builtin(s.group);
      std::filesystem::path p(s.group);
      if (p.is_relative() && !s.base_dir.empty()) p = std::filesystem::path(s.base_dir) / p;
      return FiniteGroup::from_file(p.string());
    }();
    EmbedParams p{std::move(g), s.max_level ? s.max_level : 4};
    return build_embed(p);
  }
  throw PreconditionError("unknown kind " + s.kind);
}

}  // namespace telescopes
