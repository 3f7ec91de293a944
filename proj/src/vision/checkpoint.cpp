#include "camo/vision/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace camo::vision {
namespace {

constexpr char kMagic[8] = {'C', 'A', 'M', 'O', 'N', 'E', 'T', '1'};

nlohmann::json spec_to_json(const ConvNetSpec& s) {
  return {{"input_edge", s.input_edge},
          {"input_channels", s.input_channels},
          {"base_filters", s.base_filters},
          {"conv_stages", s.conv_stages},
          {"kernel", s.kernel},
          {"dense_widths", s.dense_widths},
          {"dropout_rate", s.dropout_rate}};
}

ConvNetSpec spec_from_json(const nlohmann::json& j) {
  ConvNetSpec s;
  s.input_edge = j.at("input_edge").get<int>();
  s.input_channels = j.at("input_channels").get<int>();
  s.base_filters = j.at("base_filters").get<int>();
  s.conv_stages = j.at("conv_stages").get<int>();
  s.kernel = j.at("kernel").get<int>();
  s.dense_widths = j.at("dense_widths").get<std::vector<int>>();
  s.dropout_rate = j.at("dropout_rate").get<double>();
  return s;
}

}  // namespace

void save_checkpoint(const Net<float>& net, const std::string& path) {
  nlohmann::json manifest;
  manifest["spec"] = spec_to_json(net.spec());
  manifest["dtype"] = "f32";
  nlohmann::json arrays = nlohmann::json::array();
  for (const auto& a : net.arrays())
    arrays.push_back({{"name", a.name},
                      {"shape", a.shape},
                      {"offset", a.offset},
                      {"size", a.size}});
  manifest["arrays"] = std::move(arrays);
  const std::string header = manifest.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  const uint64_t len = header.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(net.params().data()),
            static_cast<std::streamsize>(net.params().size() * sizeof(float)));
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Net<float> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::string_view(magic, 8) != std::string_view(kMagic, 8))
    throw std::runtime_error("not a parameter checkpoint: " + path);
  uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  std::string header(len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("truncated checkpoint header: " + path);

  const auto manifest = nlohmann::json::parse(header);
  Net<float> net(spec_from_json(manifest.at("spec")));
  in.read(reinterpret_cast<char*>(net.params().data()),
          static_cast<std::streamsize>(net.params().size() * sizeof(float)));
  if (!in) throw std::runtime_error("truncated checkpoint data: " + path);

  // cross-check the stored array table against the rebuilt plan
  const auto& arrays = manifest.at("arrays");
  if (arrays.size() != net.arrays().size())
    throw std::runtime_error("checkpoint array table mismatch: " + path);
  for (size_t i = 0; i < net.arrays().size(); ++i) {
    const auto& a = net.arrays()[i];
    if (arrays[i].at("name") != a.name ||
        arrays[i].at("offset").get<size_t>() != a.offset ||
        arrays[i].at("size").get<size_t>() != a.size)
      throw std::runtime_error("checkpoint array table mismatch: " + path);
  }
  return net;
}

}  // namespace camo::vision
