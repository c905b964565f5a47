#include "friedrichs/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "friedrichs/error.hpp"

namespace friedrichs {

using nlohmann::json;

namespace {

std::vector<cplx> read_coeffs(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::Schema, std::string(what) + " must be a nonempty array");
  std::vector<cplx> out;
  for (const json& c : j) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
      throw Error(ErrorKind::Schema, std::string(what) + " entries must be [re, im] pairs");
    out.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  return out;
}

json write_coeffs(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx c : v) a.push_back({c.real(), c.imag()});
  return a;
}

}  // namespace

ModelSpec parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Schema, "scenario must be a JSON object");
  for (const char* key : {"levels", "coupling", "form_factors"})
    if (!j.contains(key)) throw Error(ErrorKind::Schema, std::string("missing key '") + key + "'");
  ModelSpec s;
  if (!j["levels"].is_array()) throw Error(ErrorKind::Schema, "levels must be an array");
  for (const json& l : j["levels"]) {
    if (!l.is_number()) throw Error(ErrorKind::Schema, "levels must be numbers");
    s.levels.push_back(l.get<double>());
  }
  if (!j["coupling"].is_number()) throw Error(ErrorKind::Schema, "coupling must be a number");
  s.coupling = j["coupling"].get<double>();
  if (!j["form_factors"].is_array()) throw Error(ErrorKind::Schema, "form_factors must be an array");
  for (const json& f : j["form_factors"]) {
    if (!f.is_object() || !f.contains("half_power") || !f["half_power"].is_number_integer())
      throw Error(ErrorKind::Schema, "form factor needs an integer half_power");
    FormFactor ff;
    ff.half_power = f["half_power"].get<int>();
    if (!f.contains("numerator") || !f.contains("denominator"))
      throw Error(ErrorKind::Schema, "form factor needs numerator and denominator");
    ff.numerator = read_coeffs(f["numerator"], "numerator");
    ff.denominator = read_coeffs(f["denominator"], "denominator");
    s.form_factors.push_back(std::move(ff));
  }
  return s;
}

ModelSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot open scenario " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const ModelSpec& spec, int indent) {
  json j;
  j["levels"] = spec.levels;
  j["coupling"] = spec.coupling;
  j["form_factors"] = json::array();
  for (const FormFactor& f : spec.form_factors)
    j["form_factors"].push_back(
        {{"half_power", f.half_power}, {"numerator", write_coeffs(f.numerator)}, {"denominator", write_coeffs(f.denominator)}});
  return j.dump(indent);
}

void save_scenario(const ModelSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << dump_scenario(spec) << "\n";
}

}  // namespace friedrichs
