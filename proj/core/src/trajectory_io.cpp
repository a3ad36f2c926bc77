#include "moc/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "moc/errors.hpp"

namespace moc {
namespace {

const char* kRunning = "running";

Status status_from(const std::string& s, const std::string& where) {
  for (auto st : {Status::Converged, Status::Stalled, Status::MaxSteps, Status::Failed}) {
    if (s == to_string(st)) return st;
  }
  throw Error(ErrorCode::Parse, where + ": unknown status '" + s + "'");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Parse, where + ": bad number '" + s + "'");
  }
  return x;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<std::string> trajectory_header(int dim, std::size_t obstacles) {
  std::vector<std::string> h = {"step", "t"};
  for (int i = 1; i <= dim; ++i) h.push_back("xi" + std::to_string(i));
  for (int i = 1; i <= dim; ++i) h.push_back("v" + std::to_string(i));
  h.push_back("min_gamma");
  for (std::size_t j = 1; j <= obstacles; ++j) h.push_back("gamma_" + std::to_string(j));
  for (std::size_t j = 1; j <= obstacles; ++j) h.push_back("theta_" + std::to_string(j));
  if (dim == 3) {
    for (std::size_t j = 1; j <= obstacles; ++j) h.push_back("phi_" + std::to_string(j));
  }
  h.push_back("status");
  return h;
}

void write_trajectory(std::ostream& out, const Trajectory& traj, int dim, std::size_t obstacles) {
  const auto header = trajectory_header(dim, obstacles);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const StepRecord& r = traj.records[k];
    if (r.state.size() != dim || r.obstacles.size() != obstacles) {
      throw Error(ErrorCode::Usage, "record " + std::to_string(k) + " does not match the header");
    }
    out << r.step << ',' << format_number(r.step * traj.dt);
    for (int i = 0; i < dim; ++i) out << ',' << format_number(r.state[i]);
    for (int i = 0; i < dim; ++i) out << ',' << format_number(r.velocity[i]);
    out << ',' << format_number(r.min_gamma);
    for (const auto& o : r.obstacles) out << ',' << format_number(o.gamma);
    for (const auto& o : r.obstacles) out << ',' << format_number(o.theta_e3);
    if (dim == 3) {
      for (const auto& o : r.obstacles) out << ',' << format_number(o.theta_e2);
    }
    out << ',' << (k + 1 == traj.records.size() ? to_string(traj.status) : kRunning) << '\n';
  }
}

void write_trajectory(const Trajectory& traj, int dim, std::size_t obstacles,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_trajectory(out, traj, dim, obstacles);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Trajectory read_trajectory(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, source + ": empty file");
  const auto header = split(line);
  int dim = 0;
  while (2 + dim < static_cast<int>(header.size()) && header[2 + dim].rfind("xi", 0) == 0) ++dim;
  if (dim < 1 || dim > 3) throw Error(ErrorCode::Parse, source + ":1: no state columns");
  const std::size_t fixed = 2 + 2 * static_cast<std::size_t>(dim) + 1 + 1;
  const std::size_t per = dim == 3 ? 3 : 2;
  if (header.size() < fixed || (header.size() - fixed) % per != 0) {
    throw Error(ErrorCode::Parse, source + ":1: unexpected column count");
  }
  const std::size_t m = (header.size() - fixed) / per;
  if (header != trajectory_header(dim, m)) {
    throw Error(ErrorCode::Parse, source + ":1: unexpected header");
  }

  Trajectory t;
  std::string last_status;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cells = split(line);
    if (cells.size() != header.size()) throw Error(ErrorCode::Parse, where + ": wrong cell count");
    std::size_t c = 0;
    StepRecord r;
    r.step = static_cast<int>(parse_double(cells[c++], where));
    const double time = parse_double(cells[c++], where);
    if (r.step == 1) t.dt = time;
    r.state.resize(dim);
    r.velocity.resize(dim);
    for (int i = 0; i < dim; ++i) r.state[i] = parse_double(cells[c++], where);
    for (int i = 0; i < dim; ++i) r.velocity[i] = parse_double(cells[c++], where);
    r.min_gamma = parse_double(cells[c++], where);
    r.obstacles.resize(m);
    for (auto& o : r.obstacles) o.gamma = parse_double(cells[c++], where);
    for (auto& o : r.obstacles) o.theta_e3 = parse_double(cells[c++], where);
    if (dim == 3) {
      for (auto& o : r.obstacles) o.theta_e2 = parse_double(cells[c++], where);
    }
    last_status = cells[c];
    t.records.push_back(std::move(r));
  }
  if (!t.records.empty()) t.status = status_from(last_status, source);
  return t;
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return read_trajectory(in, path.string());
}

}  // namespace moc
