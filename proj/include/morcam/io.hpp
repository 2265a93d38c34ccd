#pragma once

#include "morcam/czd.hpp"
#include "morcam/grid.hpp"
#include "morcam/maximal.hpp"
#include "morcam/seminorms.hpp"
#include "morcam/weights.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>

namespace morcam {

enum class FileFormat { Csv, Json };
FileFormat format_from_string(const std::string& name);
FileFormat format_from_path(const std::string& path);

/// CSV layout: a header line `# n=<dim> side=<real> res=<cells>` followed by
/// one sample per line in row-major order (no mask support).  JSON carries
/// fields dimension, side, resolution, optional mask (one 0/1 per cell) and
/// samples; with a mask present, samples hold one value per active cell.
GridFunction read_grid_function(std::istream& in, FileFormat format);
GridFunction read_grid_function(const std::string& path);
GridFunction read_grid_function(const std::string& path, FileFormat format);

void write_grid_function(const GridFunction& f, std::ostream& out, FileFormat format);
void write_grid_function(const GridFunction& f, const std::string& path);
void write_grid_function(const GridFunction& f, const std::string& path,
                         FileFormat format);

nlohmann::ordered_json cube_to_json(const Cube& q);
nlohmann::ordered_json to_json(const SeminormReport& rep);
nlohmann::ordered_json to_json(const CharStatistic& st);
nlohmann::ordered_json to_json(const WeightReport& rep);
nlohmann::ordered_json to_json(const CZDecomposition& dec);
nlohmann::ordered_json to_json(const JNGenerations& gens);
nlohmann::ordered_json to_json(const DecayProfile& profile);
nlohmann::ordered_json to_json(const DecayFit& fit);

/// Two-column CSV `t,fraction` for external plotting.
void write_profile_csv(const DecayProfile& profile, std::ostream& out);
void write_profile_csv(const DecayProfile& profile, const std::string& path);

}  // namespace morcam
