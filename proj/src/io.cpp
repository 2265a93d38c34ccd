#include "morcam/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace morcam {

using ordered_json = nlohmann::ordered_json;

FileFormat format_from_string(const std::string& name) {
  if (name == "csv") return FileFormat::Csv;
  if (name == "json") return FileFormat::Json;
  throw std::invalid_argument("unknown file format: " + name);
}

FileFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".json") return FileFormat::Json;
  return FileFormat::Csv;
}

namespace {

GridFunction read_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.empty() || header[0] != '#')
    throw std::runtime_error("grid csv: missing `# n=... side=... res=...` header");
  int n = 0, res = 0;
  Scalar side = 0.0;
  bool has_n = false, has_side = false, has_res = false;
  std::istringstream hs(header.substr(1));
  std::string token;
  while (hs >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("grid csv: malformed header token `" + token + "`");
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    try {
      if (key == "n") {
        n = std::stoi(val);
        has_n = true;
      } else if (key == "side") {
        side = std::stod(val);
        has_side = true;
      } else if (key == "res") {
        // `res=8` or `res=8,8`; all axes must agree.
        std::istringstream rs(val);
        std::string piece;
        while (std::getline(rs, piece, ',')) {
          const int r = std::stoi(piece);
          if (has_res && r != res)
            throw std::runtime_error("grid csv: per-axis resolutions must be equal");
          res = r;
          has_res = true;
        }
      } else {
        throw std::runtime_error("grid csv: unknown header key `" + key + "`");
      }
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("grid csv: malformed header value `" + token + "`");
    }
  }
  if (!has_n || !has_side || !has_res)
    throw std::runtime_error("grid csv: header must carry n, side and res");

  auto dom = std::make_shared<Domain>(n, side, res);
  Array samples(dom->cell_count());
  Index count = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (count >= dom->cell_count()) {
      ++count;  // just count the surplus for the error message
      continue;
    }
    try {
      samples[count] = std::stod(line);
    } catch (const std::exception&) {
      throw std::runtime_error("grid csv: malformed sample `" + line + "`");
    }
    ++count;
  }
  if (count != dom->cell_count())
    throw std::runtime_error("grid csv: sample count mismatch: expected " +
                             std::to_string(dom->cell_count()) + ", got " +
                             std::to_string(count));
  return GridFunction(std::move(dom), std::move(samples));
}

GridFunction read_json(std::istream& in) {
  ordered_json j;
  in >> j;
  if (!j.contains("dimension") || !j.contains("side") || !j.contains("resolution") ||
      !j.contains("samples"))
    throw std::runtime_error("grid json: needs dimension, side, resolution, samples");
  const int n = j.at("dimension").get<int>();
  const Scalar side = j.at("side").get<Scalar>();
  const int res = j.at("resolution").get<int>();
  std::vector<std::uint8_t> mask;
  if (j.contains("mask")) mask = j.at("mask").get<std::vector<std::uint8_t>>();
  auto dom = std::make_shared<Domain>(n, side, res, std::move(mask));
  const auto& js = j.at("samples");
  Array samples(static_cast<Index>(js.size()));
  for (std::size_t i = 0; i < js.size(); ++i) samples[static_cast<Index>(i)] = js[i].get<Scalar>();
  if (dom->masked()) {
    if (samples.size() != dom->active_count())
      throw std::runtime_error("grid json: sample count mismatch: expected " +
                               std::to_string(dom->active_count()) + " active samples, got " +
                               std::to_string(samples.size()));
    return GridFunction::from_active(std::move(dom), samples);
  }
  if (samples.size() != dom->cell_count())
    throw std::runtime_error("grid json: sample count mismatch: expected " +
                             std::to_string(dom->cell_count()) + ", got " +
                             std::to_string(samples.size()));
  return GridFunction(std::move(dom), std::move(samples));
}

void write_csv(const GridFunction& f, std::ostream& out) {
  const Domain& dom = f.domain();
  if (dom.masked())
    throw std::runtime_error("grid csv: masked domains need the json format");
  out << "# n=" << dom.dimension() << " side=" << std::setprecision(17)
      << dom.side() << " res=" << dom.resolution() << "\n";
  out << std::setprecision(17);
  for (Index i = 0; i < dom.cell_count(); ++i) out << f[i] << "\n";
}

void write_json(const GridFunction& f, std::ostream& out) {
  const Domain& dom = f.domain();
  ordered_json j;
  j["dimension"] = dom.dimension();
  j["side"] = dom.side();
  j["resolution"] = dom.resolution();
  if (dom.masked()) {
    j["mask"] = dom.mask();
    const Array act = f.active_values();
    j["samples"] = std::vector<Scalar>(act.data(), act.data() + act.size());
  } else {
    j["samples"] =
        std::vector<Scalar>(f.samples().data(), f.samples().data() + f.samples().size());
  }
  out << j.dump(2) << "\n";
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

GridFunction read_grid_function(std::istream& in, FileFormat format) {
  return format == FileFormat::Csv ? read_csv(in) : read_json(in);
}

GridFunction read_grid_function(const std::string& path) {
  return read_grid_function(path, format_from_path(path));
}

GridFunction read_grid_function(const std::string& path, FileFormat format) {
  auto in = open_in(path);
  return read_grid_function(in, format);
}

void write_grid_function(const GridFunction& f, std::ostream& out, FileFormat format) {
  if (format == FileFormat::Csv)
    write_csv(f, out);
  else
    write_json(f, out);
}

void write_grid_function(const GridFunction& f, const std::string& path) {
  write_grid_function(f, path, format_from_path(path));
}

void write_grid_function(const GridFunction& f, const std::string& path,
                         FileFormat format) {
  auto out = open_out(path);
  write_grid_function(f, out, format);
}

ordered_json cube_to_json(const Cube& q) {
  ordered_json j;
  j["lo"] = std::vector<int>(q.lo.begin(), q.lo.begin() + q.dim);
  j["hi"] = std::vector<int>(q.hi.begin(), q.hi.begin() + q.dim);
  j["rho"] = q.rho;
  j["measure"] = q.measure;
  return j;
}

namespace {

const char* kind_name(SeminormKind k) {
  switch (k) {
    case SeminormKind::Morrey: return "morrey";
    case SeminormKind::Campanato: return "campanato";
    case SeminormKind::Barred: return "barred";
    case SeminormKind::Tilde: return "tilde";
    case SeminormKind::AbsMinusMean: return "abs_minus_mean";
    case SeminormKind::AbsPlusMean: return "abs_plus_mean";
    case SeminormKind::InfNonneg: return "inf_nonneg";
    case SeminormKind::InfNonpos: return "inf_nonpos";
  }
  return "?";
}

}  // namespace

ordered_json to_json(const SeminormReport& rep) {
  ordered_json j;
  j["spec"] = {{"p", rep.spec.p},
               {"lambda", rep.spec.lambda},
               {"kind", kind_name(rep.spec.kind)},
               {"normalization",
                rep.spec.normalization == Normalization::Radius ? "radius" : "volume"}};
  j["sup"] = rep.sup;
  j["root"] = rep.root;
  j["cube"] = cube_to_json(rep.achieving);
  if (!rep.per_cube.empty()) j["per_cube"] = rep.per_cube;
  return j;
}

ordered_json to_json(const CharStatistic& st) {
  ordered_json j;
  j["p"] = st.p;
  j["q"] = st.q;
  j["alpha"] = st.alpha;
  j["beta"] = st.beta;
  j["sup"] = st.sup;
  j["cube"] = cube_to_json(st.achieving);
  j["exact"] = st.exact;
  return j;
}

ordered_json to_json(const WeightReport& rep) {
  ordered_json j;
  j["class"] = rep.class_tag;
  if (rep.p > 0) j["p"] = rep.p;
  if (rep.q > 0) j["q"] = rep.q;
  j["constant"] = rep.constant;
  j["cube"] = cube_to_json(rep.achieving);
  return j;
}

ordered_json to_json(const CZDecomposition& dec) {
  ordered_json j;
  j["base"] = cube_to_json(dec.base);
  j["tau"] = dec.tau;
  j["selected_measure"] = dec.selected_measure;
  j["good_measure"] = dec.good_measure;
  ordered_json cubes = ordered_json::array();
  for (const SelectedCube& s : dec.selected) {
    ordered_json c = cube_to_json(s.cube);
    c["average"] = s.average;
    cubes.push_back(std::move(c));
  }
  j["selected"] = std::move(cubes);
  return j;
}

ordered_json to_json(const JNGenerations& gens) {
  ordered_json j;
  j["base"] = cube_to_json(gens.base);
  j["p"] = gens.p;
  j["tau"] = gens.tau;
  j["depth"] = gens.depth;
  j["scale"] = gens.scale;
  j["degenerate"] = gens.degenerate;
  ordered_json gl = ordered_json::array();
  for (const Generation& g : gens.generations) {
    ordered_json e;
    e["total_measure"] = g.total_measure;
    e["off_generation_max"] = g.off_generation_max;
    ordered_json cubes = ordered_json::array();
    for (const SelectedCube& s : g.cubes) {
      ordered_json c = cube_to_json(s.cube);
      c["average"] = s.average;
      c["reference"] = s.reference;
      cubes.push_back(std::move(c));
    }
    e["cubes"] = std::move(cubes);
    gl.push_back(std::move(e));
  }
  j["generations"] = std::move(gl);
  return j;
}

ordered_json to_json(const DecayProfile& profile) {
  ordered_json j;
  j["thresholds"] = profile.thresholds;
  j["fractions"] = profile.fractions;
  return j;
}

ordered_json to_json(const DecayFit& fit) {
  ordered_json j;
  j["c1"] = fit.c1;
  j["c2"] = fit.c2;
  j["r_squared"] = fit.r_squared;
  j["t_lo"] = fit.t_lo;
  j["t_hi"] = fit.t_hi;
  j["points"] = fit.points;
  return j;
}

void write_profile_csv(const DecayProfile& profile, std::ostream& out) {
  out << "t,fraction\n" << std::setprecision(17);
  for (std::size_t i = 0; i < profile.thresholds.size(); ++i)
    out << profile.thresholds[i] << "," << profile.fractions[i] << "\n";
}

void write_profile_csv(const DecayProfile& profile, const std::string& path) {
  auto out = open_out(path);
  write_profile_csv(profile, out);
}

}  // namespace morcam
