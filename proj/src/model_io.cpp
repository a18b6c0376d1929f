#include "rbfpu/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rbfpu/error.hpp"

namespace rbfpu {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "rbfpu-model";

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

std::string serialize_model(const StoredModel& stored) {
  const PUModel& m = stored.model;
  const auto& prov = m.provenance();
  json doc;
  doc["format"] = kFormatName;
  doc["schema_version"] = kModelSchemaVersion;
  doc["dim"] = m.dim();
  doc["kernel"] = std::string(to_string(prov.kernel));
  doc["mode"] = std::string(to_string(prov.mode));
  doc["weight_function"] = prov.weight_function;
  doc["provenance"] = {{"shapes", prov.shapes},
                       {"upper_factor", prov.upper_factor},
                       {"n_radii", prov.n_radii},
                       {"min_nodes", prov.min_nodes},
                       {"fixed_shape", prov.fixed_shape},
                       {"warnings", prov.warnings}};
  doc["transform"] = {{"offset", stored.transform.offset}, {"scale", stored.transform.scale}};
  doc["cover"] = {{"per_axis", m.cover().per_axis},
                  {"spacing", m.cover().spacing},
                  {"baseline_radius", m.cover().baseline_radius}};
  json nodes = json::array();
  for (std::size_t i = 0; i < m.nodes().size(); ++i) {
    const auto p = m.nodes()[i];
    nodes.push_back(std::vector<double>(p.begin(), p.end()));
  }
  doc["nodes"] = std::move(nodes);
  json patches = json::array();
  for (const auto& p : m.subdomains()) {
    patches.push_back({{"center", p.center},
                       {"radius", p.radius},
                       {"shape", p.kernel.shape()},
                       {"radius_lower_bound", p.radius_lower_bound},
                       {"loocv_score", finite_or_null(p.loocv_score)},
                       {"members", p.members},
                       {"coefficients", p.coefficients}});
  }
  doc["subdomains"] = std::move(patches);
  return doc.dump(1);
}

StoredModel deserialize_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", std::string()) != kFormatName) {
      throw Error(ErrorCode::Parse, "not an rbfpu model file");
    }
    const int version = doc.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw Error(ErrorCode::SchemaVersion,
                  "model schema version " + std::to_string(version) +
                      " is not supported (expected " + std::to_string(kModelSchemaVersion) + ")");
    }
    const auto dim = doc.at("dim").get<std::size_t>();
    const KernelTag kernel = parse_kernel_tag(doc.at("kernel").get<std::string>());

    FitProvenance prov;
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "variable") prov.mode = SelectionMode::Variable;
    else if (mode == "fixed") prov.mode = SelectionMode::Fixed;
    else throw Error(ErrorCode::Parse, "unknown selection mode '" + mode + "'");
    prov.kernel = kernel;
    prov.weight_function = doc.at("weight_function").get<std::string>();
    const json& pj = doc.at("provenance");
    prov.shapes = pj.at("shapes").get<std::vector<double>>();
    prov.upper_factor = pj.at("upper_factor").get<double>();
    prov.n_radii = pj.at("n_radii").get<std::size_t>();
    prov.min_nodes = pj.at("min_nodes").get<std::size_t>();
    prov.fixed_shape = pj.at("fixed_shape").get<double>();
    prov.warnings = pj.at("warnings").get<std::vector<std::string>>();

    DomainTransform transform;
    transform.offset = doc.at("transform").at("offset").get<std::vector<double>>();
    transform.scale = doc.at("transform").at("scale").get<std::vector<double>>();
    if (transform.offset.size() != dim || transform.scale.size() != dim) {
      throw Error(ErrorCode::Parse, "transform dimension does not match model dimension");
    }

    PUCover cover = make_pu_cover(doc.at("cover").at("per_axis").get<std::size_t>(), dim);

    PointSet nodes(dim);
    for (const auto& p : doc.at("nodes")) nodes.push_back(p.get<std::vector<double>>());

    std::vector<LocalInterpolant> patches;
    for (const auto& pj2 : doc.at("subdomains")) {
      LocalInterpolant patch;
      patch.center = pj2.at("center").get<std::vector<double>>();
      patch.radius = pj2.at("radius").get<double>();
      patch.kernel = Kernel(kernel, pj2.at("shape").get<double>());
      patch.radius_lower_bound = pj2.at("radius_lower_bound").get<double>();
      patch.loocv_score = number_or_inf(pj2.at("loocv_score"));
      patch.members = pj2.at("members").get<std::vector<std::size_t>>();
      patch.coefficients = pj2.at("coefficients").get<std::vector<double>>();
      patches.push_back(std::move(patch));
    }
    return {PUModel(std::move(nodes), std::move(cover), std::move(patches), std::move(prov)),
            std::move(transform)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const StoredModel& stored) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << serialize_model(stored) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

StoredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace rbfpu
