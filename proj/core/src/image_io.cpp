#include "sonoscrub/image_io.hpp"

#include <filesystem>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace sonoscrub {

namespace {

// OpenCV hands back BGR(A); swizzle by hand so only core+imgcodecs are needed.
ScanImage from_mat(const cv::Mat& m, std::string id) {
    cv::Mat m8;
    if (m.depth() == CV_8U) {
        m8 = m;
    } else if (m.depth() == CV_16U) {
        double mn, mx;
        cv::minMaxLoc(m.reshape(1), &mn, &mx);
        if (mx > mn)
            m.convertTo(m8, CV_8U, 255.0 / (mx - mn), -mn * 255.0 / (mx - mn));
        else
            m8 = cv::Mat::zeros(m.rows, m.cols, CV_8UC(m.channels()));
    } else {
        throw FormatError("unsupported pixel depth in " + id);
    }
    const int ch = m8.channels();
    if (ch != 1 && ch != 3 && ch != 4)
        throw FormatError("unsupported channel count in " + id);
    const int out_ch = ch == 1 ? 1 : 3;
    ScanImage img = ScanImage::make(m8.cols, m8.rows, out_ch, 0, std::move(id));
    for (int y = 0; y < m8.rows; ++y) {
        const std::uint8_t* row = m8.ptr(y);
        std::uint8_t* dst = img.data.data() + img.index(0, y);
        if (ch == 1) {
            std::copy(row, row + m8.cols, dst);
        } else {
            for (int x = 0; x < m8.cols; ++x) {
                dst[3 * x] = row[ch * x + 2];
                dst[3 * x + 1] = row[ch * x + 1];
                dst[3 * x + 2] = row[ch * x];
            }
        }
    }
    return img;
}

cv::Mat to_mat(const ScanImage& img) {
    if (!img.valid()) throw ParameterError("image encode: invalid image");
    cv::Mat m(img.height, img.width, CV_8UC(img.channels));
    for (int y = 0; y < img.height; ++y) {
        const std::uint8_t* src = img.data.data() + img.index(0, y);
        std::uint8_t* dst = m.ptr(y);
        if (img.channels == 1) {
            std::copy(src, src + img.width, dst);
        } else {
            for (int x = 0; x < img.width; ++x) {
                dst[3 * x] = src[3 * x + 2];
                dst[3 * x + 1] = src[3 * x + 1];
                dst[3 * x + 2] = src[3 * x];
            }
        }
    }
    return m;
}

}  // namespace

ScanImage load_image(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED);
    if (m.empty()) throw FormatError("cannot decode image: " + path);
    return from_mat(m, std::filesystem::path(path).stem().string());
}

void save_png(const ScanImage& img, const std::string& path) {
    if (!cv::imwrite(path, to_mat(img)))
        throw FormatError("cannot write: " + path);
}

std::vector<std::uint8_t> encode_png(const ScanImage& img) {
    std::vector<std::uint8_t> buf;
    if (!cv::imencode(".png", to_mat(img), buf))
        throw FormatError("png encode failed for " + img.source_id);
    return buf;
}

}  // namespace sonoscrub
