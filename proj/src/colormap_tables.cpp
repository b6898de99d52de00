#include "spx/colormap.hpp"

namespace spx {

// 256-entry tables sampled from the RdBu_r and Purples maps.
const std::array<Rgb8, 256> kDivergingTable = {{
    {5, 48, 97},
    {6, 50, 100},
    {7, 52, 103},
    {8, 54, 106},
    {9, 56, 109},
    {10, 59, 112},
    {12, 61, 115},
    {13, 63, 118},
    {14, 65, 121},
    {15, 67, 123},
    {16, 69, 126},
    {17, 71, 129},
    {18, 73, 132},
    {19, 76, 135},
    {20, 78, 138},
    {21, 80, 141},
    {23, 82, 144},
    {24, 84, 147},
    {25, 86, 150},
    {26, 88, 153},
    {27, 90, 156},
    {28, 92, 159},
    {29, 95, 162},
    {30, 97, 165},
    {31, 99, 168},
    {32, 101, 171},
    {34, 103, 172},
    {35, 105, 173},
    {36, 106, 174},
    {38, 108, 175},
    {39, 110, 176},
    {40, 112, 177},
    {42, 113, 178},
    {43, 115, 179},
    {44, 117, 180},
    {46, 119, 181},
    {47, 121, 181},
    {48, 122, 182},
    {50, 124, 183},
    {51, 126, 184},
    {52, 128, 185},
    {54, 129, 186},
    {55, 131, 187},
    {56, 133, 188},
    {58, 135, 189},
    {59, 136, 190},
    {60, 138, 190},
    {62, 140, 191},
    {63, 142, 192},
    {64, 143, 193},
    {66, 145, 194},
    {67, 147, 195},
    {70, 149, 196},
    {73, 151, 197},
    {76, 153, 198},
    {79, 155, 199},
    {82, 157, 200},
    {86, 159, 201},
    {89, 161, 202},
    {92, 163, 203},
    {95, 165, 205},
    {98, 167, 206},
    {101, 169, 207},
    {104, 171, 208},
    {107, 172, 209},
    {110, 174, 210},
    {113, 176, 211},
    {117, 178, 212},
    {120, 180, 213},
    {123, 182, 214},
    {126, 184, 215},
    {129, 186, 216},
    {132, 188, 217},
    {135, 190, 218},
    {138, 192, 219},
    {141, 194, 220},
    {144, 196, 221},
    {147, 198, 222},
    {150, 199, 223},
    {152, 200, 224},
    {155, 201, 224},
    {157, 203, 225},
    {160, 204, 226},
    {162, 205, 227},
    {165, 206, 227},
    {167, 208, 228},
    {169, 209, 229},
    {172, 210, 229},
    {174, 211, 230},
    {177, 213, 231},
    {179, 214, 232},
    {182, 215, 232},
    {184, 216, 233},
    {187, 218, 234},
    {189, 219, 234},
    {192, 220, 235},
    {194, 221, 236},
    {197, 223, 236},
    {199, 224, 237},
    {202, 225, 238},
    {204, 226, 239},
    {207, 228, 239},
    {209, 229, 240},
    {210, 230, 240},
    {212, 230, 241},
    {213, 231, 241},
    {215, 232, 241},
    {216, 233, 241},
    {218, 233, 242},
    {219, 234, 242},
    {221, 235, 242},
    {222, 235, 242},
    {224, 236, 243},
    {225, 237, 243},
    {227, 237, 243},
    {228, 238, 244},
    {230, 239, 244},
    {231, 240, 244},
    {233, 240, 244},
    {234, 241, 245},
    {236, 242, 245},
    {237, 242, 245},
    {239, 243, 245},
    {240, 244, 246},
    {242, 245, 246},
    {243, 245, 246},
    {245, 246, 247},
    {246, 247, 247},
    {247, 246, 246},
    {247, 245, 244},
    {248, 244, 242},
    {248, 243, 240},
    {248, 242, 239},
    {248, 241, 237},
    {249, 240, 235},
    {249, 239, 233},
    {249, 238, 231},
    {249, 237, 229},
    {249, 235, 227},
    {250, 234, 225},
    {250, 233, 223},
    {250, 232, 222},
    {250, 231, 220},
    {251, 230, 218},
    {251, 229, 216},
    {251, 228, 214},
    {251, 227, 212},
    {252, 226, 210},
    {252, 224, 208},
    {252, 223, 207},
    {252, 222, 205},
    {253, 221, 203},
    {253, 220, 201},
    {253, 219, 199},
    {253, 217, 196},
    {252, 215, 194},
    {252, 213, 191},
    {252, 211, 188},
    {251, 208, 185},
    {251, 206, 183},
    {251, 204, 180},
    {250, 202, 177},
    {250, 200, 175},
    {249, 198, 172},
    {249, 196, 169},
    {249, 194, 167},
    {248, 191, 164},
    {248, 189, 161},
    {248, 187, 158},
    {247, 185, 156},
    {247, 183, 153},
    {247, 181, 150},
    {246, 179, 148},
    {246, 177, 145},
    {246, 175, 142},
    {245, 172, 139},
    {245, 170, 137},
    {245, 168, 134},
    {244, 166, 131},
    {243, 164, 129},
    {242, 161, 127},
    {241, 158, 125},
    {240, 156, 123},
    {239, 153, 121},
    {238, 150, 119},
    {236, 147, 116},
    {235, 145, 114},
    {234, 142, 112},
    {233, 139, 110},
    {232, 137, 108},
    {230, 134, 106},
    {229, 131, 104},
    {228, 128, 102},
    {227, 126, 100},
    {226, 123, 98},
    {225, 120, 96},
    {223, 118, 94},
    {222, 115, 92},
    {221, 112, 89},
    {220, 110, 87},
    {219, 107, 85},
    {218, 104, 83},
    {216, 101, 81},
    {215, 99, 79},
    {214, 96, 77},
    {213, 93, 76},
    {211, 90, 74},
    {210, 88, 73},
    {208, 85, 72},
    {207, 82, 70},
    {206, 79, 69},
    {204, 76, 68},
    {203, 73, 66},
    {201, 71, 65},
    {200, 68, 64},
    {198, 65, 62},
    {197, 62, 61},
    {196, 59, 60},
    {194, 56, 58},
    {193, 54, 57},
    {191, 51, 56},
    {190, 48, 54},
    {189, 45, 53},
    {187, 42, 52},
    {186, 40, 50},
    {184, 37, 49},
    {183, 34, 48},
    {182, 31, 46},
    {180, 28, 45},
    {179, 25, 44},
    {177, 24, 43},
    {174, 23, 42},
    {171, 22, 42},
    {168, 21, 41},
    {165, 20, 41},
    {162, 19, 40},
    {159, 18, 40},
    {156, 17, 39},
    {153, 16, 39},
    {150, 15, 39},
    {147, 14, 38},
    {144, 13, 38},
    {141, 12, 37},
    {138, 11, 37},
    {135, 10, 36},
    {132, 9, 36},
    {129, 8, 35},
    {127, 8, 35},
    {124, 7, 34},
    {121, 6, 34},
    {118, 5, 33},
    {115, 4, 33},
    {112, 3, 32},
    {109, 2, 32},
    {106, 1, 31},
    {103, 0, 31},
}};

const std::array<Rgb8, 256> kSequentialTable = {{
    {252, 251, 253},
    {252, 251, 253},
    {251, 250, 252},
    {251, 250, 252},
    {250, 249, 252},
    {250, 249, 252},
    {250, 248, 251},
    {249, 248, 251},
    {249, 247, 251},
    {248, 247, 251},
    {248, 247, 250},
    {248, 246, 250},
    {247, 246, 250},
    {247, 245, 250},
    {246, 245, 249},
    {246, 244, 249},
    {245, 244, 249},
    {245, 244, 249},
    {245, 243, 248},
    {244, 243, 248},
    {244, 242, 248},
    {243, 242, 248},
    {243, 241, 247},
    {243, 241, 247},
    {242, 240, 247},
    {242, 240, 247},
    {241, 240, 246},
    {241, 239, 246},
    {241, 239, 246},
    {240, 238, 246},
    {240, 238, 245},
    {239, 237, 245},
    {239, 237, 245},
    {238, 236, 245},
    {238, 236, 244},
    {237, 235, 244},
    {236, 235, 244},
    {236, 234, 243},
    {235, 233, 243},
    {234, 233, 243},
    {234, 232, 242},
    {233, 232, 242},
    {232, 231, 242},
    {232, 230, 242},
    {231, 230, 241},
    {230, 229, 241},
    {230, 229, 241},
    {229, 228, 240},
    {228, 227, 240},
    {228, 227, 240},
    {227, 226, 239},
    {226, 226, 239},
    {226, 225, 239},
    {225, 224, 238},
    {224, 224, 238},
    {224, 223, 238},
    {223, 223, 237},
    {222, 222, 237},
    {222, 221, 237},
    {221, 221, 236},
    {220, 220, 236},
    {220, 220, 236},
    {219, 219, 236},
    {218, 218, 235},
    {218, 218, 235},
    {217, 217, 234},
    {216, 216, 234},
    {215, 215, 233},
    {214, 214, 233},
    {213, 213, 233},
    {212, 212, 232},
    {211, 211, 232},
    {210, 210, 231},
    {209, 210, 231},
    {208, 209, 230},
    {207, 208, 230},
    {206, 207, 229},
    {206, 206, 229},
    {205, 205, 228},
    {204, 204, 228},
    {203, 203, 227},
    {202, 202, 227},
    {201, 201, 226},
    {200, 200, 226},
    {199, 200, 225},
    {198, 199, 225},
    {197, 198, 225},
    {196, 197, 224},
    {195, 196, 224},
    {194, 195, 223},
    {193, 194, 223},
    {192, 193, 222},
    {191, 192, 222},
    {190, 191, 221},
    {190, 190, 221},
    {189, 190, 220},
    {188, 189, 220},
    {187, 187, 219},
    {186, 186, 219},
    {185, 185, 218},
    {184, 184, 217},
    {183, 183, 217},
    {182, 182, 216},
    {181, 181, 215},
    {180, 180, 215},
    {179, 179, 214},
    {178, 178, 213},
    {177, 177, 213},
    {176, 175, 212},
    {175, 174, 212},
    {174, 173, 211},
    {174, 172, 210},
    {173, 171, 210},
    {172, 170, 209},
    {171, 169, 208},
    {170, 168, 208},
    {169, 167, 207},
    {168, 166, 207},
    {167, 164, 206},
    {166, 163, 205},
    {165, 162, 205},
    {164, 161, 204},
    {163, 160, 203},
    {162, 159, 203},
    {161, 158, 202},
    {160, 157, 202},
    {159, 156, 201},
    {158, 155, 200},
    {158, 154, 200},
    {157, 153, 199},
    {156, 152, 199},
    {155, 151, 198},
    {154, 150, 198},
    {153, 149, 198},
    {152, 148, 197},
    {151, 147, 197},
    {150, 146, 196},
    {149, 145, 196},
    {148, 144, 195},
    {147, 144, 195},
    {146, 143, 195},
    {145, 142, 194},
    {144, 141, 194},
    {143, 140, 193},
    {142, 139, 193},
    {142, 138, 192},
    {141, 137, 192},
    {140, 136, 191},
    {139, 135, 191},
    {138, 134, 191},
    {137, 134, 190},
    {136, 133, 190},
    {135, 132, 189},
    {134, 131, 189},
    {133, 130, 188},
    {132, 129, 188},
    {131, 128, 187},
    {130, 127, 187},
    {129, 126, 187},
    {128, 125, 186},
    {128, 124, 186},
    {127, 123, 185},
    {126, 121, 184},
    {125, 120, 183},
    {125, 119, 183},
    {124, 117, 182},
    {123, 116, 181},
    {123, 114, 180},
    {122, 113, 180},
    {121, 112, 179},
    {121, 110, 178},
    {120, 109, 178},
    {119, 108, 177},
    {119, 106, 176},
    {118, 105, 175},
    {117, 103, 175},
    {117, 102, 174},
    {116, 101, 173},
    {115, 99, 173},
    {114, 98, 172},
    {114, 97, 171},
    {113, 95, 170},
    {112, 94, 170},
    {112, 92, 169},
    {111, 91, 168},
    {110, 90, 168},
    {110, 88, 167},
    {109, 87, 166},
    {108, 85, 165},
    {108, 84, 165},
    {107, 83, 164},
    {106, 81, 163},
    {105, 80, 163},
    {105, 79, 162},
    {104, 77, 161},
    {103, 76, 161},
    {103, 75, 160},
    {102, 73, 159},
    {101, 72, 159},
    {101, 71, 158},
    {100, 69, 158},
    {99, 68, 157},
    {99, 67, 156},
    {98, 66, 156},
    {97, 64, 155},
    {97, 63, 154},
    {96, 62, 154},
    {95, 60, 153},
    {94, 59, 152},
    {94, 58, 152},
    {93, 56, 151},
    {92, 55, 151},
    {92, 54, 150},
    {91, 52, 149},
    {90, 51, 149},
    {90, 50, 148},
    {89, 48, 147},
    {88, 47, 147},
    {88, 46, 146},
    {87, 44, 146},
    {86, 43, 145},
    {85, 42, 144},
    {85, 40, 144},
    {84, 39, 143},
    {83, 38, 143},
    {83, 37, 142},
    {82, 35, 141},
    {81, 34, 141},
    {81, 33, 140},
    {80, 32, 140},
    {79, 31, 139},
    {79, 29, 139},
    {78, 28, 138},
    {77, 27, 137},
    {77, 26, 137},
    {76, 24, 136},
    {76, 23, 136},
    {75, 22, 135},
    {74, 21, 135},
    {74, 20, 134},
    {73, 18, 133},
    {72, 17, 133},
    {72, 16, 132},
    {71, 15, 132},
    {70, 13, 131},
    {70, 12, 131},
    {69, 11, 130},
    {68, 10, 130},
    {68, 9, 129},
    {67, 7, 128},
    {66, 6, 128},
    {66, 5, 127},
    {65, 4, 127},
    {64, 2, 126},
    {64, 1, 126},
    {63, 0, 125},
}};

}  // namespace spx
