#include "homog/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace homog {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out{path};
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace

void write_tensor_field_csv(const std::string& path, const TensorField& field) {
  std::ofstream out = open_out(path);
  out << "I,J,q,t00,t01,t10,t11\n";
  for (int I = 0; I < field.nx(); ++I) {
    for (int J = 0; J < field.ny(); ++J) {
      for (int q = 0; q < field.nq(); ++q) {
        out << I << ',' << J << ',' << q;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            out << ',' << format_double(field(I, J, q, i, j).real());
        out << '\n';
      }
    }
  }
}

void write_scalar_field_csv(const std::string& path, const std::vector<double>& values,
                            const Grid& grid) {
  if (values.size() != static_cast<std::size_t>(grid.npts())) {
    throw std::invalid_argument("write_scalar_field_csv: value count mismatch");
  }
  std::ofstream out = open_out(path);
  out << "I,J,value\n";
  for (int I = 0; I < grid.nx; ++I)
    for (int J = 0; J < grid.ny; ++J)
      out << I << ',' << J << ','
          << format_double(values[static_cast<std::size_t>(I) * grid.ny + J]) << '\n';
}

void write_vtk(const std::string& path, const Grid& grid,
               const std::map<std::string, std::vector<double>>& fields) {
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n"
      << "periodic cell fields\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << grid.nx << ' ' << grid.ny << " 1\n"
      << "ORIGIN 0 0 0\n"
      << "SPACING " << format_double(grid.dx()) << ' ' << format_double(grid.dy())
      << " 1\n"
      << "POINT_DATA " << grid.npts() << '\n';
  for (const auto& [name, values] : fields) {
    if (values.size() != static_cast<std::size_t>(grid.npts())) {
      throw std::invalid_argument("write_vtk: value count mismatch for " + name);
    }
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    // VTK structured points iterate x fastest.
    for (int J = 0; J < grid.ny; ++J)
      for (int I = 0; I < grid.nx; ++I)
        out << format_double(values[static_cast<std::size_t>(I) * grid.ny + J]) << '\n';
  }
}

void write_phase_map_csv(const std::string& path, const PhaseMap& map,
                         const std::string& header_comment) {
  std::ofstream out = open_out(path);
  if (!header_comment.empty()) {
    std::istringstream lines{header_comment};
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  out << "I,J,phase\n";
  for (int I = 0; I < map.nx; ++I)
    for (int J = 0; J < map.ny; ++J)
      out << I << ',' << J << ',' << map.phase_at(I, J) << '\n';
}

PhaseMap read_phase_map_csv(const std::string& path, const Grid& grid,
                            const std::vector<PhaseParams>& params) {
  std::ifstream in = open_in(path);
  PhaseMap map;
  map.nx = grid.nx;
  map.ny = grid.ny;
  map.phase.assign(static_cast<std::size_t>(grid.npts()), -1);
  map.params = params;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'I') continue;
    std::istringstream row{line};
    int I, J, phase;
    char comma;
    if (!(row >> I >> comma >> J >> comma >> phase)) {
      throw std::runtime_error("malformed phase map row in " + path + ": " + line);
    }
    if (I < 0 || I >= grid.nx || J < 0 || J >= grid.ny) {
      throw std::runtime_error("phase map voxel out of range in " + path);
    }
    map.phase[static_cast<std::size_t>(I) * grid.ny + J] = phase;
  }
  map.validate(grid);
  return map;
}

Config read_config(const std::string& path) {
  std::ifstream in = open_in(path);
  Config cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r");
      const auto last = s.find_last_not_of(" \t\r");
      return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) cfg[key] = value;
  }
  return cfg;
}

double config_double(const Config& cfg, const std::string& key, double fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : std::stod(it->second);
}

int config_int(const Config& cfg, const std::string& key, int fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : std::stoi(it->second);
}

std::string config_string(const Config& cfg, const std::string& key,
                          const std::string& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

}  // namespace homog
