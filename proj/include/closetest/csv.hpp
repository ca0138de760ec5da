// Copyright 2026 The closetest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLOSETEST_CSV_HPP_
#define CLOSETEST_CSV_HPP_

// Deterministic CSV assembly.  Every output starts with '#' comment lines
// echoing the configuration (including the seed), so a result file is
// self-describing and reruns are byte-comparable.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace closetest {

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return std::string(buf);
}

class CsvBuilder {
 public:
  void comment(const std::string& line) {
    body_ += "# " + line + "\n";
  }

  void config(const std::string& key, const std::string& value) {
    comment(key + "=" + value);
  }
  void config(const std::string& key, std::int64_t value) {
    config(key, std::to_string(value));
  }
  void config(const std::string& key, double value) {
    config(key, format_real(value));
  }

  void header(const std::string& columns) { body_ += columns + "\n"; }

  class Row {
   public:
    explicit Row(CsvBuilder* owner) : owner_(owner) {}
    Row& cell(const std::string& v) {
      if (!first_) line_ += ',';
      line_ += v;
      first_ = false;
      return *this;
    }
    Row& cell(double v) { return cell(format_real(v)); }
    Row& cell(std::int64_t v) { return cell(std::to_string(v)); }
    ~Row() { owner_->body_ += line_ + "\n"; }

   private:
    CsvBuilder* owner_;
    std::string line_;
    bool first_ = true;
  };

  Row row() { return Row(this); }

  const std::string& str() const { return body_; }

  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << body_;
  }

 private:
  friend class Row;
  std::string body_;
};

}  // namespace closetest

#endif  // CLOSETEST_CSV_HPP_
