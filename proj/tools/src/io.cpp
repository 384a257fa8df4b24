#include "io.hpp"

#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filtering_stream.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace skewstream::cli {

namespace {

// Owns both the file and the decompressing stream layered over it.
class GzipInput : public boost::iostreams::filtering_istream {
public:
    explicit GzipInput(const std::string& path) : file_(path, std::ios::binary) {
        if (!file_) throw std::runtime_error("cannot open input '" + path + "'");
        push(boost::iostreams::gzip_decompressor());
        push(file_);
    }

private:
    std::ifstream file_;
};

// Non-owning wrapper so stdin fits the same unique_ptr interface.
class BorrowedInput : public std::istream {
public:
    explicit BorrowedInput(std::istream& in) : std::istream(in.rdbuf()) {}
};

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::unique_ptr<std::istream> open_input(const std::string& path) {
    if (path == "-") return std::make_unique<BorrowedInput>(std::cin);
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) return std::make_unique<GzipInput>(path);
    auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*in) throw std::runtime_error("cannot open input '" + path + "'");
    return in;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out.flush()) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace skewstream::cli
