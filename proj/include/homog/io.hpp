#ifndef HOMOG_IO_HPP
#define HOMOG_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "homog/field.hpp"
#include "homog/grid.hpp"
#include "homog/materials.hpp"

namespace homog {

/// Full-precision decimal formatting (17 significant digits); the CSV
/// byte layout is the interchange contract.
std::string format_double(double value);

/// One row per (voxel, evaluation point): I, J, q, tensor components row-major.
void write_tensor_field_csv(const std::string& path, const TensorField& field);

/// Rows I, J, value for a scalar per-voxel field.
void write_scalar_field_csv(const std::string& path, const std::vector<double>& values,
                            const Grid& grid);

/// Legacy-VTK structured points file with one SCALARS block per named component.
void write_vtk(const std::string& path, const Grid& grid,
               const std::map<std::string, std::vector<double>>& fields);

/// Phase map CSV rows: I, J, phase_id. Lines starting with '#' are comments.
void write_phase_map_csv(const std::string& path, const PhaseMap& map,
                         const std::string& header_comment = "");
PhaseMap read_phase_map_csv(const std::string& path, const Grid& grid,
                            const std::vector<PhaseParams>& params);

/// Plain-text key-value configuration ("key = value", '#' comments).
using Config = std::map<std::string, std::string>;
Config read_config(const std::string& path);

double config_double(const Config& cfg, const std::string& key, double fallback);
int config_int(const Config& cfg, const std::string& key, int fallback);
std::string config_string(const Config& cfg, const std::string& key,
                          const std::string& fallback);

}  // namespace homog

#endif
