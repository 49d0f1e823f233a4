// Copyright 2026 The UNER Corpus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UNER_ATOMIC_FILE_H_
#define UNER_ATOMIC_FILE_H_

#include <filesystem>
#include <fstream>
#include <string_view>

namespace uner {

// Writes to a sibling temp file; Commit() renames it over the final path.
// Destroying an uncommitted writer deletes the temp file, so readers never
// see a partial file at `path`.
class AtomicFileWriter {
 public:
  explicit AtomicFileWriter(std::filesystem::path path);
  ~AtomicFileWriter();

  AtomicFileWriter(const AtomicFileWriter&) = delete;
  AtomicFileWriter& operator=(const AtomicFileWriter&) = delete;

  std::ostream& stream() { return out_; }
  void Commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view content);

}  // namespace uner

#endif  // UNER_ATOMIC_FILE_H_
