#include "mvx/util.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mvx/errors.hpp"

namespace mvx {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string content_hash_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write file: " + path);
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(ErrorKind::Io, "write failed: " + path);
    }
}

std::string format_real(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    std::string s(buf, res.ptr);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::vector<std::size_t> utf8_offsets(std::string_view text) {
    std::vector<std::size_t> offsets;
    std::size_t i = 0;
    while (i < text.size()) {
        offsets.push_back(i);
        unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if ((c & 0xe0) == 0xc0) len = 2;
        else if ((c & 0xf0) == 0xe0) len = 3;
        else if ((c & 0xf8) == 0xf0) len = 4;
        for (std::size_t k = 1; k < len && i + k < text.size(); ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xc0) != 0x80) {
                len = k;
                break;
            }
        }
        i += len;
    }
    offsets.push_back(text.size());
    return offsets;
}

std::size_t utf8_length(std::string_view text) { return utf8_offsets(text).size() - 1; }

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Schema: return "SchemaViolation";
        case ErrorKind::DuplicateClassName: return "DuplicateClassName";
        case ErrorKind::UnknownSuper: return "UnknownSuper";
        case ErrorKind::UnknownTarget: return "UnknownTarget";
        case ErrorKind::CyclicInheritance: return "CyclicInheritance";
        case ErrorKind::DuplicateFeature: return "DuplicateFeature";
        case ErrorKind::DuplicateId: return "DuplicateId";
        case ErrorKind::UnknownClass: return "UnknownClass";
        case ErrorKind::AbstractInstantiation: return "AbstractInstantiation";
        case ErrorKind::UnknownObject: return "UnknownObject";
        case ErrorKind::UnknownFeature: return "UnknownFeature";
        case ErrorKind::TypeMismatch: return "TypeMismatch";
        case ErrorKind::MultiplicityViolation: return "MultiplicityViolation";
        case ErrorKind::UnknownOperation: return "UnknownOperation";
        case ErrorKind::CycleDetected: return "CycleDetected";
        case ErrorKind::MissingArgument: return "MissingArgument";
        case ErrorKind::UnknownReceiver: return "UnknownReceiver";
        case ErrorKind::UnknownContract: return "UnknownContract";
        case ErrorKind::UnknownFixture: return "UnknownFixture";
        case ErrorKind::UnknownContextObject: return "UnknownContextObject";
        case ErrorKind::Io: return "IoError";
        case ErrorKind::EvalError: return "EvalError";
    }
    return "Error";
}

} // namespace mvx
