#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcsim/record.h"

namespace dcsim {

/// Malformed trace input. The CLI maps it to exit code 1.
class trace_error : public std::runtime_error {
public:
    trace_error(const std::string& source, uint64_t line, const std::string& what);
    uint64_t line_number() const { return line_; }

private:
    uint64_t line_;
};

/// Parses one line of the text format
///   <thread_id> <R|W> <hex_address> <hex_pc> <instret>
/// Returns nullopt for blank and comment-only lines. `#` starts a comment.
std::optional<access_record> parse_trace_line(std::string_view line, uint64_t line_number,
                                              std::string_view source = "<trace>");

std::string format_record(const access_record& r);

class trace_source {
public:
    virtual ~trace_source() = default;
    virtual bool next(access_record& out) = 0;
};

class vector_trace_source : public trace_source {
public:
    explicit vector_trace_source(std::span<const access_record> records) : records_(records) {}
    bool next(access_record& out) override
    {
        if (pos_ == records_.size())
            return false;
        out = records_[pos_++];
        return true;
    }

private:
    std::span<const access_record> records_;
    std::size_t pos_ = 0;
};

/// Lazy reader for trace files; gzip input is detected from the magic bytes.
class trace_reader : public trace_source {
public:
    using warning_handler = std::function<void(const std::string&)>;

    explicit trace_reader(const std::string& path, warning_handler on_warning = {});
    ~trace_reader() override;
    trace_reader(const trace_reader&) = delete;
    trace_reader& operator=(const trace_reader&) = delete;

    bool next(access_record& out) override;

    bool compressed() const;
    uint64_t line_number() const { return line_; }
    uint64_t warnings() const { return warnings_; }

private:
    class line_input;

    std::string path_;
    std::unique_ptr<line_input> input_;
    warning_handler on_warning_;
    std::map<uint32_t, uint64_t> last_instret_;
    uint64_t line_ = 0;
    uint64_t warnings_ = 0;
};

std::vector<access_record> read_trace_file(const std::string& path, trace_reader::warning_handler on_warning = {});

void write_trace(std::ostream& out, std::span<const access_record> records, std::string_view header = {});

/// Writes a trace file, gzip-compressed when the path ends in ".gz".
void write_trace_file(const std::string& path, std::span<const access_record> records,
                      std::string_view header = {});

} // namespace dcsim
