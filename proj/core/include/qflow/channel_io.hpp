#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "qflow/channels.hpp"

namespace qflow {

// A channel document holds V and optionally W (W defaults to V downstream).
// Accepted shapes:
//   {"d":2, "arity":2, "kraus":[...]}                 V only
//   {"v":{...channel...}, "w":{...channel...}}        V and W
//   [{...channel...}, {...channel...}]                V, then W
// Each Kraus matrix is a list of rows of [re, im] pairs.
struct ChannelDocument {
  KrausChannel v;
  std::optional<KrausChannel> w;
};

// Throws ParseError naming the JSON path ($.kraus[0][1][0] style).
ChannelDocument parse_channel_document(std::string_view text);
ChannelDocument load_channel_file(const std::string& path);

std::string channel_to_json(const KrausChannel& ch);

}  // namespace qflow
