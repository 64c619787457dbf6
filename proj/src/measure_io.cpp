#include "lsl/measure_io.hpp"

#include <fstream>
#include <vector>

#include "lsl/error.hpp"

namespace lsl {

using nlohmann::json;

json measure_to_json(const BoundaryMeasure& m) {
  json j;
  j["atoms"] = json::array();
  for (const Atom& a : m.atoms()) j["atoms"].push_back({{"angle", a.angle.value()}, {"weight", a.weight}});
  if (const auto& d = m.density()) {
    j["density"] = {{"n", d->size()},
                    {"values", std::vector<double>(d->values().begin(), d->values().end())}};
  }
  return j;
}

BoundaryMeasure measure_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::invalid_input, "measure must be a JSON object");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
      if (!j.at("atoms").is_array()) throw Error(ErrorKind::invalid_input, "atoms must be an array");
      for (const auto& a : j.at("atoms"))
        atoms.push_back({Angle(a.at("angle").get<double>()), a.at("weight").get<double>()});
    }
    std::optional<DensityGrid> density;
    if (j.contains("density") && !j.at("density").is_null()) {
      const auto& d = j.at("density");
      auto values = d.at("values").get<std::vector<double>>();
      if (d.contains("n") && d.at("n").get<std::size_t>() != values.size())
        throw Error(ErrorKind::invalid_input, "density.n does not match the number of values");
      density.emplace(std::move(values));
    }
    return make_measure(std::move(atoms), std::move(density));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("malformed measure JSON: ") + e.what());
  }
}

BoundaryMeasure read_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_input, path + ": " + e.what());
  }
  return measure_from_json(j);
}

void write_measure_file(const std::string& path, const BoundaryMeasure& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write " + path);
  out << measure_to_json(m).dump(2) << '\n';
}

json jet_to_json(const Jet2& j) {
  return {{"u", j.u}, {"ux", j.ux}, {"uy", j.uy}, {"uxx", j.uxx}, {"uxy", j.uxy}, {"uyy", j.uyy}};
}

}  // namespace lsl
