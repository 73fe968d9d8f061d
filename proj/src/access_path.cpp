#include "lockgraph/access_path.hpp"

namespace lockgraph {

std::string AccessPath::str() const {
  std::string out = base;
  for (const auto &sel : selectors) {
    out += '.';
    out += sel;
  }
  return out;
}

AccessPath AccessPath::parse(std::string_view text) {
  AccessPath path;
  size_t start = 0;
  bool first = true;
  while (start <= text.size()) {
    size_t dot = text.find('.', start);
    std::string_view seg = (dot == std::string_view::npos)
                               ? text.substr(start)
                               : text.substr(start, dot - start);
    if (seg.empty())
      return AccessPath{}; // malformed: empty base or selector
    if (first) {
      path.base = std::string(seg);
      first = false;
    } else {
      path.selectors.emplace_back(seg);
    }
    if (dot == std::string_view::npos)
      break;
    start = dot + 1;
  }
  return path;
}

AccessPath substitute(const AccessPath &path, const Binding &binding) {
  auto it = binding.find(path.base);
  if (it == binding.end())
    return path;
  AccessPath result = it->second;
  result.selectors.insert(result.selectors.end(), path.selectors.begin(),
                          path.selectors.end());
  return result;
}

std::string path_set_str(const PathSet &paths) {
  std::string out = "{";
  bool first = true;
  for (const auto &p : paths) {
    if (!first)
      out += ", ";
    out += p.str();
    first = false;
  }
  out += "}";
  return out;
}

} // namespace lockgraph
