// Copyright 2026 The mqnt Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mqnt/io/model_file.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include <json.hpp>

#include "mqnt/errors.hpp"
#include "mqnt/io/byte_io.hpp"
#include "mqnt/io/crc64.hpp"

namespace mqnt {

namespace {

using Json = nlohmann::ordered_json;

constexpr char kMagic[] = "MQNT0001";
constexpr std::size_t kAlign = 64;

std::size_t align_up(std::size_t n, std::size_t a) { return (n + a - 1) / a * a; }

bool float_exact(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return static_cast<double>(static_cast<float>(x)) == x; });
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

// Canonical tensor order: embeddings, blocks in order, final norm, head.
struct TensorSlot {
  std::string name;
  std::vector<double>* vec = nullptr;  // norm gains
  Matrix* mat = nullptr;               // dense weights
  std::optional<LayerRef> layer;       // set for linear layers
};

std::vector<TensorSlot> tensor_slots(const ModelConfig& cfg, ModelWeights& w) {
  std::vector<TensorSlot> s;
  s.push_back({"tok_emb", nullptr, &w.tok_emb, std::nullopt});
  s.push_back({"pos_emb", nullptr, &w.pos_emb, std::nullopt});
  for (std::size_t b = 0; b < cfg.n_layers; ++b) {
    const std::string p = "blocks." + std::to_string(b) + ".";
    s.push_back({p + "attn_norm", &w.blocks[b].attn_norm, nullptr, std::nullopt});
    for (LayerName n : {LayerName::q_proj, LayerName::k_proj, LayerName::v_proj, LayerName::o_proj}) {
      const LayerRef ref{b, n};
      s.push_back({ref.to_string(), nullptr, &w.linear(ref), ref});
    }
    s.push_back({p + "ff_norm", &w.blocks[b].ff_norm, nullptr, std::nullopt});
    for (LayerName n : {LayerName::ff_up, LayerName::ff_down}) {
      const LayerRef ref{b, n};
      s.push_back({ref.to_string(), nullptr, &w.linear(ref), ref});
    }
  }
  s.push_back({"final_norm", &w.final_norm, nullptr, std::nullopt});
  const LayerRef head = LayerRef::head(cfg);
  s.push_back({head.to_string(), nullptr, &w.lm_head, head});
  return s;
}

void write_reals(ByteWriter& out, std::span<const double> v, bool as_f32) {
  for (double x : v) {
    if (as_f32) {
      out.f32(static_cast<float>(x));
    } else {
      out.f64(x);
    }
  }
}

// qpack region: [params: f64 scale, i32 zero point, 4 zero bytes] x rows*groups,
// packed codes padded to 8 bytes, [u32 row, u32 col, f64 value] x outliers,
// f64 input scales. A 16-bit tensor stores rows*cols f64 values instead of
// params and codes.
void write_qpack(ByteWriter& out, const QuantizedTensor& q, Json& entry) {
  entry["bits"] = q.bits();
  entry["group_size"] = q.group_size();
  entry["scheme"] = to_string(q.scheme());
  if (q.is_passthrough()) {
    write_reals(out, q.passthrough_values().values(), false);
  } else {
    for (const auto& p : q.params()) {
      out.f64(p.scale);
      out.i32(p.zero_point);
      out.u32(0);
    }
    out.bytes(q.packed());
    out.pad_to(8);
  }
  entry["codes_bytes"] = q.packed().size();
  entry["outliers"] = q.outliers().size();
  for (const auto& o : q.outliers()) {
    out.u32(o.row);
    out.u32(o.col);
    out.f64(o.value);
  }
  entry["input_scales"] = q.input_scales().size();
  write_reals(out, q.input_scales(), false);
}

QuantizedTensor read_qpack(ByteReader& in, const Json& e, std::size_t rows, std::size_t cols) {
  const int bits = e.at("bits").get<int>();
  const std::size_t gs = e.at("group_size").get<std::size_t>();
  const Scheme scheme = parse_scheme(e.at("scheme").get<std::string>());
  const std::size_t n_codes = e.at("codes_bytes").get<std::size_t>();
  const std::size_t n_out = e.at("outliers").get<std::size_t>();
  const std::size_t n_scales = e.at("input_scales").get<std::size_t>();
  if (bits == 16) {
    std::vector<double> v(rows * cols);
    for (double& x : v) x = in.f64();
    std::vector<Outlier> outliers(n_out);
    for (auto& o : outliers) o = {in.u32(), in.u32(), in.f64()};
    std::vector<double> scales(n_scales);
    for (double& s : scales) s = in.f64();
    return QuantizedTensor::passthrough(Matrix(rows, cols, std::move(v)), std::move(scales));
  }
  if (gs == 0) throw FormatError("qpack group_size is 0");
  const std::size_t groups = (cols + gs - 1) / gs;
  std::vector<GroupParams> params(rows * groups);
  for (auto& p : params) {
    p.scale = in.f64();
    p.zero_point = in.i32();
    in.u32();
  }
  const auto packed_span = in.bytes(n_codes);
  std::vector<std::uint8_t> packed(packed_span.begin(), packed_span.end());
  in.skip(align_up(n_codes, 8) - n_codes);
  std::vector<Outlier> outliers(n_out);
  for (auto& o : outliers) {
    o.row = in.u32();
    o.col = in.u32();
    o.value = in.f64();
  }
  std::vector<double> scales(n_scales);
  for (double& s : scales) s = in.f64();
  return QuantizedTensor::from_packed(rows, cols, bits, gs, scheme, std::move(packed), std::move(params),
                                      std::move(outliers), std::move(scales));
}

Json config_json(const ModelConfig& c) {
  Json j;
  j["vocab_size"] = c.vocab_size;
  j["context_len"] = c.context_len;
  j["d_model"] = c.d_model;
  j["n_layers"] = c.n_layers;
  j["n_heads"] = c.n_heads;
  j["d_ff"] = c.d_ff;
  return j;
}

ModelConfig config_from(const Json& j) {
  ModelConfig c;
  c.vocab_size = j.at("vocab_size").get<std::size_t>();
  c.context_len = j.at("context_len").get<std::size_t>();
  c.d_model = j.at("d_model").get<std::size_t>();
  c.n_layers = j.at("n_layers").get<std::size_t>();
  c.n_heads = j.at("n_heads").get<std::size_t>();
  c.d_ff = j.at("d_ff").get<std::size_t>();
  c.validate();
  return c;
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model& model) {
  const ModelConfig& cfg = model.config();
  ModelWeights w = model.weights();
  ByteWriter payload;
  Json index = Json::array();
  for (const TensorSlot& t : tensor_slots(cfg, w)) {
    payload.pad_to(kAlign);
    Json e;
    e["name"] = t.name;
    const std::size_t offset = payload.size();
    if (t.layer && model.is_quantized(*t.layer)) {
      const QuantizedTensor& q = *model.quantized(*t.layer);
      e["dtype"] = "qpack";
      e["shape"] = {q.rows(), q.cols()};
      e["act_bits"] = model.act_bits(*t.layer);
      write_qpack(payload, q, e);
    } else {
      const std::span<const double> v = t.mat ? t.mat->values() : std::span<const double>(*t.vec);
      const bool f32 = float_exact(v);
      e["dtype"] = f32 ? "f32" : "f64";
      e["shape"] = t.mat ? Json{t.mat->rows(), t.mat->cols()} : Json{t.vec->size()};
      write_reals(payload, v, f32);
    }
    e["offset"] = offset;
    e["bytes"] = payload.size() - offset;
    index.push_back(std::move(e));
  }
  payload.pad_to(kAlign);

  Json header;
  header["format"] = "mqnt-model";
  header["version"] = kModelFormatVersion;
  header["config"] = config_json(cfg);
  header["payload_bytes"] = payload.size();
  header["checksum"] = "crc64-xz:" + hex64(crc64_xz(payload.data()));
  header["tensors"] = std::move(index);
  const std::string text = header.dump();

  ByteWriter out;
  out.text(std::string_view(kMagic, 8));
  out.u64(text.size());
  out.text(text);
  out.pad_to(kAlign);
  out.bytes(payload.data());
  return out.take();
}

Model deserialize_model(std::span<const std::uint8_t> bytes, bool verify_checksum) {
  ByteReader in(bytes);
  if (in.text(8) != std::string_view(kMagic, 8)) throw FormatError("bad magic at offset 0");
  const std::uint64_t header_len = in.u64();
  if (header_len > in.remaining()) throw FormatError("header length " + std::to_string(header_len) + " at offset 8 exceeds file");
  Json header;
  try {
    header = Json::parse(in.text(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("header at offset 16 is not valid JSON: ") + e.what());
  }
  try {
    if (header.at("format") != "mqnt-model") throw FormatError("header format is not mqnt-model");
    const auto version = header.at("version").get<std::uint32_t>();
    if (version != kModelFormatVersion) {
      throw VersionError("model file version " + std::to_string(version) + ", expected " +
                         std::to_string(kModelFormatVersion));
    }
    const ModelConfig cfg = config_from(header.at("config"));
    const std::size_t payload_at = align_up(16 + header_len, kAlign);
    const auto payload_bytes = header.at("payload_bytes").get<std::size_t>();
    if (payload_at > bytes.size() || payload_bytes != bytes.size() - payload_at) {
      throw FormatError("payload at offset " + std::to_string(payload_at) + " declares " +
                        std::to_string(payload_bytes) + " bytes, file has " +
                        std::to_string(bytes.size() > payload_at ? bytes.size() - payload_at : 0));
    }
    const auto payload = bytes.subspan(payload_at, payload_bytes);
    if (verify_checksum) {
      const std::string want = header.at("checksum").get<std::string>();
      const std::string got = "crc64-xz:" + hex64(crc64_xz(payload));
      if (want != got) {
        throw ChecksumError("payload checksum mismatch over offsets " + std::to_string(payload_at) + ".." +
                            std::to_string(payload_at + payload_bytes) + ": header " + want + ", computed " + got);
      }
    }

    // Index: every region in bounds, aligned, non-overlapping, names matching the config.
    std::map<std::string, const Json*> by_name;
    std::vector<std::pair<std::size_t, std::size_t>> regions;
    for (const Json& e : header.at("tensors")) {
      const auto name = e.at("name").get<std::string>();
      const auto off = e.at("offset").get<std::size_t>();
      const auto len = e.at("bytes").get<std::size_t>();
      if (off % kAlign != 0) throw FormatError(name + ": offset " + std::to_string(payload_at + off) + " is not 64-byte aligned");
      if (off > payload_bytes || len > payload_bytes - off) {
        throw FormatError(name + ": region at offset " + std::to_string(payload_at + off) + " runs past end of file");
      }
      if (!by_name.emplace(name, &e).second) throw FormatError("duplicate tensor " + name);
      regions.emplace_back(off, len);
    }
    std::sort(regions.begin(), regions.end());
    for (std::size_t i = 1; i < regions.size(); ++i) {
      if (regions[i].first < regions[i - 1].first + regions[i - 1].second) {
        throw FormatError("overlapping regions at offset " + std::to_string(payload_at + regions[i].first));
      }
    }

    ModelWeights w = ModelWeights::zeros(cfg);
    const auto slots = tensor_slots(cfg, w);
    if (by_name.size() != slots.size()) {
      throw FormatError("tensor index has " + std::to_string(by_name.size()) + " entries, expected " +
                        std::to_string(slots.size()));
    }
    std::vector<std::tuple<LayerRef, QuantizedTensor, int>> quantized;
    for (const TensorSlot& t : slots) {
      const auto it = by_name.find(t.name);
      if (it == by_name.end()) throw FormatError("missing tensor " + t.name);
      const Json& e = *it->second;
      const auto off = e.at("offset").get<std::size_t>();
      ByteReader r(payload.subspan(off, e.at("bytes").get<std::size_t>()), payload_at + off);
      const auto dtype = e.at("dtype").get<std::string>();
      const auto shape = e.at("shape").get<std::vector<std::size_t>>();
      const std::size_t rows = t.mat ? t.mat->rows() : t.vec->size();
      const std::size_t cols = t.mat ? t.mat->cols() : 0;
      if ((t.mat && shape != std::vector<std::size_t>{rows, cols}) || (!t.mat && shape != std::vector<std::size_t>{rows})) {
        throw FormatError(t.name + ": shape does not match the config");
      }
      if (dtype == "qpack") {
        if (!t.layer) throw FormatError(t.name + ": only linear layers may be qpack");
        QuantizedTensor q = read_qpack(r, e, rows, cols);
        *t.mat = effective_weights(q);
        quantized.emplace_back(*t.layer, std::move(q), e.at("act_bits").get<int>());
        continue;
      }
      if (dtype != "f32" && dtype != "f64") throw FormatError(t.name + ": unknown dtype " + dtype);
      const std::span<double> dst = t.mat ? t.mat->values() : std::span<double>(*t.vec);
      for (double& x : dst) x = dtype == "f32" ? static_cast<double>(r.f32()) : r.f64();
      for (double x : dst) {
        if (!std::isfinite(x)) throw FormatError(t.name + ": non-finite value");
      }
    }
    Model m(cfg, std::move(w));
    for (auto& [ref, q, act] : quantized) m.replace_weights(ref, std::move(q), act);
    if (!quantized.empty()) m.finalize();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed header: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path, bool verify_checksum) {
  return deserialize_model(read_file(path), verify_checksum);
}

}  // namespace mqnt
