#include "kerrosc/io_util.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace kerrosc {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

namespace {

std::filesystem::path temp_path_for(const std::filesystem::path& path) {
    return path.parent_path() / (path.filename().string() + ".tmp");
}

void commit_file(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = temp_path_for(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

CsvWriter::CsvWriter(std::filesystem::path path) : path_(std::move(path)) {}

CsvWriter::~CsvWriter() {
    if (!committed_) {
        std::error_code ec;
        std::filesystem::remove(temp_path_for(path_), ec);
    }
}

void CsvWriter::comment(const std::string& line) {
    buffer_ += "# ";
    buffer_ += line;
    buffer_ += '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::commit() {
    if (committed_) return;
    commit_file(path_, buffer_);
    committed_ = true;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    commit_file(path, content);
}

} // namespace kerrosc
