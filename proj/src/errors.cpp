#include "fountain/errors.hpp"

namespace fountain {

const char* to_string(ParseErrorKind kind) noexcept {
    switch (kind) {
        case ParseErrorKind::truncated: return "truncated frame";
        case ParseErrorKind::bad_magic: return "bad magic";
        case ParseErrorKind::bad_version: return "unsupported version";
        case ParseErrorKind::unknown_scheme: return "unknown scheme";
        case ParseErrorKind::bad_header: return "malformed header";
    }
    return "parse error";
}

}  // namespace fountain
