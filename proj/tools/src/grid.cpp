#include "grid.hpp"

#include <charconv>
#include <string>

#include "moc/errors.hpp"

namespace moc::cli {
namespace {

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;
};

template <class T>
T read(std::string_view s, std::string_view spec) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Usage, "bad grid spec '" + std::string(spec) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

std::vector<Vec> parse_grid(std::string_view spec, int dim) {
  const auto parts = split(spec, ',');
  if (static_cast<int>(parts.size()) != dim) {
    throw Error(ErrorCode::Usage, "grid spec needs " + std::to_string(dim) + " axes");
  }
  std::vector<Axis> axes;
  for (auto p : parts) {
    const auto f = split(p, ':');
    if (f.size() != 3) throw Error(ErrorCode::Usage, "grid axis must be lo:hi:n, got '" + std::string(p) + "'");
    Axis a{read<double>(f[0], spec), read<double>(f[1], spec), read<int>(f[2], spec)};
    if (a.n < 1) throw Error(ErrorCode::Usage, "grid axis needs at least one point");
    axes.push_back(a);
  }
  std::vector<Vec> pts;
  std::vector<int> idx(dim, 0);
  for (;;) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) {
      const Axis& a = axes[i];
      x[i] = a.n == 1 ? a.lo : a.lo + (a.hi - a.lo) * idx[i] / (a.n - 1);
    }
    pts.push_back(x);
    int k = dim - 1;
    while (k >= 0 && ++idx[k] == axes[k].n) idx[k--] = 0;
    if (k < 0) break;
  }
  return pts;
}

}  // namespace moc::cli
