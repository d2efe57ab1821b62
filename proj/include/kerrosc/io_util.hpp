// io_util.hpp — CSV/JSON artifact emission: shortest round-trip decimal
// formatting, '#'-prefixed metadata comments, LF line endings, atomic
// temp-file + rename writes.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kerrosc {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

// Buffered CSV writer; nothing is visible at `path` until commit().
// The temp file is removed if the writer is destroyed uncommitted.
class CsvWriter {
  public:
    explicit CsvWriter(std::filesystem::path path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void comment(const std::string& line); // "# " + line
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    void commit();

  private:
    std::filesystem::path path_;
    std::string buffer_;
    bool committed_ = false;
};

// Atomic write of a complete text file (used for JSON sidecars).
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace kerrosc
