#pragma once

#include <string>
#include <string_view>

namespace pace::util {

// SHA-256, hex-encoded. Used for content-addressed cache keys and
// provenance digests in emitted artifacts.
std::string sha256_hex(std::string_view data);

}  // namespace pace::util
