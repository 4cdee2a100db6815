#include "dcsim/trace_io.h"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <zlib.h>

namespace dcsim {

trace_error::trace_error(const std::string& source, uint64_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

bool parse_uint(std::string_view s, int base, uint64_t& out)
{
    if (base == 16 && s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
        s.remove_prefix(2);
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view strip_comment(std::string_view line)
{
    if (auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
    return line;
}

} // namespace

std::optional<access_record> parse_trace_line(std::string_view line, uint64_t line_number,
                                              std::string_view source)
{
    line = strip_comment(line);
    std::array<std::string_view, 5> fields;
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i == line.size())
            break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (n == fields.size())
            throw trace_error(std::string(source), line_number, "too many fields");
        fields[n++] = line.substr(start, i - start);
    }
    if (n == 0)
        return std::nullopt;
    if (n != fields.size())
        throw trace_error(std::string(source), line_number,
                          "expected 5 fields '<thread> <R|W> <addr> <pc> <instret>', got " + std::to_string(n));

    access_record r;
    uint64_t thread = 0;
    if (!parse_uint(fields[0], 10, thread) || thread > UINT32_MAX)
        throw trace_error(std::string(source), line_number, "bad thread id '" + std::string(fields[0]) + "'");
    r.thread_id = static_cast<uint32_t>(thread);
    if (fields[1] == "R" || fields[1] == "r")
        r.kind = access_kind::read;
    else if (fields[1] == "W" || fields[1] == "w")
        r.kind = access_kind::write;
    else
        throw trace_error(std::string(source), line_number, "bad access kind '" + std::string(fields[1]) + "'");
    if (!parse_uint(fields[2], 16, r.address))
        throw trace_error(std::string(source), line_number, "bad address '" + std::string(fields[2]) + "'");
    if (!parse_uint(fields[3], 16, r.pc))
        throw trace_error(std::string(source), line_number, "bad pc '" + std::string(fields[3]) + "'");
    if (!parse_uint(fields[4], 10, r.instret))
        throw trace_error(std::string(source), line_number, "bad instret '" + std::string(fields[4]) + "'");
    return r;
}

std::string format_record(const access_record& r)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%u %c 0x%llx 0x%llx %llu", r.thread_id, r.is_write() ? 'W' : 'R',
                  static_cast<unsigned long long>(r.address), static_cast<unsigned long long>(r.pc),
                  static_cast<unsigned long long>(r.instret));
    return buf;
}

// trace_reader

class trace_reader::line_input {
public:
    explicit line_input(const std::string& path)
    {
        unsigned char magic[2] = {0, 0};
        {
            std::ifstream probe(path, std::ios::binary);
            if (!probe)
                throw trace_error(path, 0, "cannot open trace file");
            probe.read(reinterpret_cast<char*>(magic), 2);
        }
        gzip_ = magic[0] == 0x1f && magic[1] == 0x8b;
        if (gzip_) {
            gz_ = gzopen(path.c_str(), "rb");
            if (!gz_)
                throw trace_error(path, 0, "cannot open gzip trace file");
        } else {
            plain_.open(path);
            if (!plain_)
                throw trace_error(path, 0, "cannot open trace file");
        }
    }
    ~line_input()
    {
        if (gz_)
            gzclose(gz_);
    }

    bool getline(std::string& line)
    {
        if (!gzip_)
            return static_cast<bool>(std::getline(plain_, line));
        line.clear();
        char buf[4096];
        for (;;) {
            if (!gzgets(gz_, buf, sizeof buf))
                return !line.empty();
            line += buf;
            if (!line.empty() && line.back() == '\n') {
                line.pop_back();
                return true;
            }
        }
    }

    bool gzip() const { return gzip_; }

private:
    bool gzip_ = false;
    gzFile gz_ = nullptr;
    std::ifstream plain_;
};

trace_reader::trace_reader(const std::string& path, warning_handler on_warning)
    : path_(path), input_(std::make_unique<line_input>(path)), on_warning_(std::move(on_warning))
{
}

trace_reader::~trace_reader() = default;

bool trace_reader::compressed() const { return input_->gzip(); }

bool trace_reader::next(access_record& out)
{
    std::string line;
    while (input_->getline(line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto r = parse_trace_line(line, line_, path_);
        if (!r)
            continue;
        auto [it, inserted] = last_instret_.try_emplace(r->thread_id, r->instret);
        if (!inserted) {
            if (r->instret < it->second) {
                ++warnings_;
                if (on_warning_)
                    on_warning_(path_ + ":" + std::to_string(line_) + ": instret decreased for thread "
                                + std::to_string(r->thread_id));
            }
            it->second = r->instret;
        }
        out = *r;
        return true;
    }
    return false;
}

std::vector<access_record> read_trace_file(const std::string& path, trace_reader::warning_handler on_warning)
{
    trace_reader reader(path, std::move(on_warning));
    std::vector<access_record> records;
    access_record r;
    while (reader.next(r))
        records.push_back(r);
    return records;
}

void write_trace(std::ostream& out, std::span<const access_record> records, std::string_view header)
{
    if (!header.empty())
        out << "# " << header << '\n';
    for (const auto& r : records)
        out << format_record(r) << '\n';
}

void write_trace_file(const std::string& path, std::span<const access_record> records, std::string_view header)
{
    const bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
    if (!gz) {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write " + path);
        write_trace(out, records, header);
        return;
    }
    std::ostringstream text;
    write_trace(text, records, header);
    const std::string data = text.str();
    gzFile f = gzopen(path.c_str(), "wb");
    if (!f)
        throw std::runtime_error("cannot write " + path);
    const int written = data.empty() ? 0 : gzwrite(f, data.data(), static_cast<unsigned>(data.size()));
    gzclose(f);
    if (written != static_cast<int>(data.size()))
        throw std::runtime_error("short write to " + path);
}

} // namespace dcsim
