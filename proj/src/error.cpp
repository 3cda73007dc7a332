#include "cfia/error.hpp"

#include <utility>

namespace cfia {

namespace {

std::string describe_parse(const std::string& code, std::size_t position,
                           const std::string& reason) {
  std::string msg = "invalid region code \"" + code + "\": " + reason;
  if (position != std::string::npos && position < code.size()) {
    msg += " at '";
    msg += code[position];
    msg += "' (offset " + std::to_string(position) + ")";
  }
  return msg;
}

std::string describe_data(const std::string& file, std::size_t line,
                          const std::string& rule, const std::string& detail) {
  std::string msg = file;
  if (line > 0) msg += ":" + std::to_string(line);
  msg += ": [" + rule + "] " + detail;
  return msg;
}

}  // namespace

RegionParseError::RegionParseError(std::string code, std::size_t position,
                                   std::string reason)
    : ValidationError(describe_parse(code, position, reason)),
      code_(std::move(code)),
      position_(position),
      reason_(std::move(reason)) {}

DataError::DataError(std::string file, std::size_t line, std::string rule,
                     std::string detail)
    : ValidationError(describe_data(file, line, rule, detail)),
      file_(std::move(file)),
      line_(line),
      rule_(std::move(rule)) {}

}  // namespace cfia
