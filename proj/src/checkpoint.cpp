#include "z2lab/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace z2lab {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string encode_doubles(const std::vector<double>& v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(v.size() * 16, '0');
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v[i]);
    for (int k = 15; k >= 0; --k) {
      out[i * 16 + static_cast<std::size_t>(k)] = digits[bits & 0xf];
      bits >>= 4;
    }
  }
  return out;
}

std::vector<double> decode_doubles(std::string_view hex) {
  if (hex.size() % 16 != 0) throw CheckpointError("checkpoint: malformed value block");
  std::vector<double> out(hex.size() / 16);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < 16; ++k) {
      const char c = hex[i * 16 + k];
      int d;
      if (c >= '0' && c <= '9') {
        d = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        d = c - 'a' + 10;
      } else {
        throw CheckpointError("checkpoint: malformed value block");
      }
      bits = (bits << 4) | static_cast<std::uint64_t>(d);
    }
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp,
                      const LatticeGeometry& geometry) {
  json chains = json::array();
  for (const ChainState& c : cp.chains) {
    json series = json::object();
    for (const auto& [key, values] : c.series) series[key] = encode_doubles(values);
    chains.push_back({{"rng", c.rng.state()},
                      {"field", encode_doubles(c.field)},
                      {"therm_history", encode_doubles(c.therm_history)},
                      {"series", series},
                      {"proposed", c.stats.proposed},
                      {"accepted", c.stats.accepted}});
  }
  json payload = {
      {"config", cp.config},
      {"geometry",
       {{"dimension", geometry.dim()},
        {"extents", geometry.extents()},
        {"boundary", std::string(to_string(geometry.boundary()))}}},
      {"sweeps", cp.sweeps},
      {"n_therm", cp.n_therm ? json(*cp.n_therm) : json(nullptr)},
      {"chains", chains},
  };
  const std::string body = payload.dump();
  const json header = {{"format_version", kCheckpointVersion},
                       {"checksum", hex64(fnv1a64(body))}};

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("checkpoint: cannot write " + tmp.string());
    out << header.dump() << '\n' << body << '\n';
    if (!out) throw CheckpointError("checkpoint: write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError("checkpoint: cannot move into " + path.string() + ": " + ec.message());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("checkpoint: cannot open " + path.string());
  std::string header_line, body;
  if (!std::getline(in, header_line) || !std::getline(in, body)) {
    throw CheckpointError("checkpoint: " + path.string() + " is truncated");
  }
  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception&) {
    throw CheckpointError("checkpoint: " + path.string() + " has a corrupted header");
  }
  if (!header.is_object() || !header.contains("format_version") ||
      !header["format_version"].is_number_integer()) {
    throw CheckpointError("checkpoint: " + path.string() + " has no format_version");
  }
  const int version = header["format_version"].get<int>();
  if (version != kCheckpointVersion) {
    throw CheckpointError("checkpoint: format_version " + std::to_string(version) +
                          " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  if (!header.contains("checksum") || !header["checksum"].is_string() ||
      header["checksum"].get<std::string>() != hex64(fnv1a64(body))) {
    throw CheckpointError("checkpoint: checksum mismatch in " + path.string() +
                          " (file is corrupted)");
  }
  try {
    const json payload = json::parse(body);
    Checkpoint cp;
    cp.config = payload.at("config");
    cp.sweeps = payload.at("sweeps").get<std::uint64_t>();
    if (!payload.at("n_therm").is_null()) cp.n_therm = payload.at("n_therm").get<std::uint64_t>();
    for (const json& c : payload.at("chains")) {
      ChainState s;
      s.rng.set_state(c.at("rng").get<std::string>());
      s.field = decode_doubles(c.at("field").get<std::string>());
      s.therm_history = decode_doubles(c.at("therm_history").get<std::string>());
      for (const auto& [key, value] : c.at("series").items()) {
        s.series[key] = decode_doubles(value.get<std::string>());
      }
      s.stats.proposed = c.at("proposed").get<std::size_t>();
      s.stats.accepted = c.at("accepted").get<std::size_t>();
      cp.chains.push_back(std::move(s));
    }
    return cp;
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError("checkpoint: malformed payload in " + path.string() + ": " + e.what());
  }
}

}  // namespace z2lab
