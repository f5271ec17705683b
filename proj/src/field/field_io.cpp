#include "bohmlab/field/field_io.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bohmlab {

namespace {

double parseDouble(const std::string& text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw std::runtime_error("field csv: bad number '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) parts.push_back(item);
  return parts;
}

struct Header {
  SpatialGrid grid;
  double time;
};

std::string headerLine(const SpatialGrid& g, double t) {
  std::ostringstream os;
  os << "# grid dim=" << g.dim();
  if (g.dim() == 1) {
    os << " n=" << g.points(0) << " qmin=" << formatDouble(g.qmin(0)) << " qmax=" << formatDouble(g.qmax(0));
  } else {
    os << " n=" << g.points(0) << 'x' << g.points(1) << " qmin=" << formatDouble(g.qmin(0)) << ','
       << formatDouble(g.qmin(1)) << " qmax=" << formatDouble(g.qmax(0)) << ',' << formatDouble(g.qmax(1));
  }
  os << " t=" << formatDouble(t);
  return os.str();
}

Header parseHeader(const std::string& line) {
  const std::string prefix = "# grid ";
  if (line.rfind(prefix, 0) != 0) throw std::runtime_error("field csv: missing '# grid' header");
  std::map<std::string, std::string> kv;
  for (const auto& tok : split(line.substr(prefix.size()), ' ')) {
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::runtime_error("field csv: bad header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"dim", "n", "qmin", "qmax", "t"})
    if (!kv.count(key)) throw std::runtime_error(std::string("field csv: header lacks ") + key);
  const int dim = std::stoi(kv["dim"]);
  const double t = parseDouble(kv["t"]);
  if (dim == 1) {
    return {SpatialGrid::line(std::stoul(kv["n"]), parseDouble(kv["qmin"]), parseDouble(kv["qmax"])), t};
  }
  if (dim == 2) {
    const auto n = split(kv["n"], 'x');
    const auto lo = split(kv["qmin"], ',');
    const auto hi = split(kv["qmax"], ',');
    if (n.size() != 2 || lo.size() != 2 || hi.size() != 2) throw std::runtime_error("field csv: bad 2D header");
    return {SpatialGrid::plane({std::stoul(n[0]), std::stoul(n[1])}, {parseDouble(lo[0]), parseDouble(lo[1])},
                               {parseDouble(hi[0]), parseDouble(hi[1])}),
            t};
  }
  throw std::runtime_error("field csv: dim must be 1 or 2");
}

void writeCoords(std::ostream& out, const SpatialGrid& g, std::size_t flat) {
  const Point p = g.node(flat);
  out << formatDouble(p[0]);
  if (g.dim() == 2) out << ',' << formatDouble(p[1]);
}

// Reads rows with `cols` value columns after the coordinates.
std::pair<Header, std::vector<std::vector<double>>> readRows(std::istream& in, std::size_t cols) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("field csv: empty input");
  Header h = parseHeader(line);
  const std::size_t width = static_cast<std::size_t>(h.grid.dim()) + cols;
  std::vector<std::vector<double>> rows;
  rows.reserve(h.grid.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != width) throw std::runtime_error("field csv: wrong column count");
    std::vector<double> row;
    for (const auto& p : parts) row.push_back(parseDouble(p));
    rows.push_back(std::move(row));
  }
  if (rows.size() != h.grid.size()) throw std::runtime_error("field csv: row count does not match grid");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Point p = h.grid.node(i);
    for (int a = 0; a < h.grid.dim(); ++a)
      if (rows[i][a] != p[a]) throw std::runtime_error("field csv: coordinates out of grid order");
  }
  return {std::move(h), std::move(rows)};
}

}  // namespace

std::string formatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("formatDouble failed");
  return std::string(buf, ptr);
}

void writeFieldCsv(std::ostream& out, const WaveField& psi) {
  const auto& g = psi.grid();
  out << headerLine(g, psi.time()) << '\n';
  for (std::size_t i = 0; i < psi.size(); ++i) {
    writeCoords(out, g, i);
    out << ',' << formatDouble(psi[i].real()) << ',' << formatDouble(psi[i].imag()) << '\n';
  }
}

void writeFieldCsv(std::ostream& out, const RealField& field, double time) {
  const auto& g = field.grid();
  out << headerLine(g, time) << '\n';
  for (std::size_t i = 0; i < field.size(); ++i) {
    writeCoords(out, g, i);
    out << ',' << formatDouble(field[i]) << '\n';
  }
}

WaveField readWaveFieldCsv(std::istream& in) {
  auto [h, rows] = readRows(in, 2);
  const auto d = static_cast<std::size_t>(h.grid.dim());
  std::vector<Complex> values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) values[i] = {rows[i][d], rows[i][d + 1]};
  return WaveField(h.grid, std::move(values), h.time);
}

RealField readRealFieldCsv(std::istream& in, FieldUnit unit) {
  auto [h, rows] = readRows(in, 1);
  const auto d = static_cast<std::size_t>(h.grid.dim());
  std::vector<double> values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i][d];
  return RealField(h.grid, std::move(values), unit);
}

}  // namespace bohmlab
