#pragma once

#include <string>

#include "json.hpp"

#include "gramkit/certificate.hpp"
#include "gramkit/frame.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit {

using Json = nlohmann::json;

/// {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order.
Json matrix_to_json(const LinearMap& m);
LinearMap matrix_from_json(const Json& j);

/// {"dim": n, "vectors": [[[re, im], ...], ...]}, one entry per element.
Json frame_to_json(const FrameSystem& f);
FrameSystem frame_from_json(const Json& j);

/// One line per row, comma-separated "re+imi" cells. Doubles are written in
/// shortest round-trip form, so reading back is bit-exact.
std::string matrix_to_csv(const LinearMap& m);
LinearMap matrix_from_csv(const std::string& text);

std::string format_double(double v);

/// Paths ending in ".csv" use the CSV form, everything else JSON.
LinearMap read_matrix(const std::string& path);
void write_matrix(const std::string& path, const LinearMap& m);
FrameSystem read_frame(const std::string& path);
void write_frame(const std::string& path, const FrameSystem& f);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

Json certificate_to_json(const Certificate& c);

}  // namespace gramkit
