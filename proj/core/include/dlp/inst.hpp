#pragma once

#include <optional>
#include <string>

namespace dlp {

enum class inst_id { wp, fodl, pl, sl };

const char* inst_name(inst_id id);
std::optional<inst_id> inst_from_name(const std::string& s);

} // namespace dlp
