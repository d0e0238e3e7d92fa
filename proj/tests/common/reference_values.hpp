#pragma once

// Reference values computed with mpmath at 50 significant digits and frozen
// here before the library was written.

namespace randcompare::reference {

struct NormalPoint {
  double x;
  double cdf;
};

inline constexpr NormalPoint kNormalCdf[] = {
    {-8.0, 6.2209605742717841235e-16},
    {-5.0, 2.8665157187919391167e-7},
    {-3.5, 0.00023262907903552503635},
    {-2.67, 0.003792562347685490035},
    {-1.96, 0.024997895148220436213},
    {-1.0, 0.15865525393145705141},
    {-0.5, 0.30853753872598689636},
    {-0.001, 0.49960105778608893741},
    {0.0, 0.5},
    {0.001, 0.50039894221391106259},
    {0.3, 0.61791142218895263307},
    {0.5, 0.69146246127401310364},
    {1.0, 0.84134474606854294859},
    {1.5, 0.933192798731141934},
    {1.96, 0.97500210485177956379},
    {2.5, 0.99379033467422386483},
    {2.67, 0.99620743765231450997},
    {3.5, 0.99976737092096447496},
    {5.0, 0.99999971334842812081},
    {8.0, 0.9999999999999993779},
};

struct StudentPoint {
  double x;
  double df;
  double cdf;
};

inline constexpr StudentPoint kStudentCdf[] = {
    {-3.0, 1.0, 0.10241638234956672582},
    {1.0, 1.0, 0.75},
    {2.0, 1.0, 0.85241638234956672582},
    {-2.0, 2.0, 0.091751709536136983634},
    {0.5, 2.0, 0.66666666666666666667},
    {1.5, 3.0, 0.88470806737758847386},
    {-1.0, 4.5, 0.18400254194009429078},
    {2.2, 5.0, 0.9604530510484088261},
    {-2.63, 56.696, 0.0054865248317164650492},
    {2.63, 62.0, 0.99462249321238452581},
    {0.1, 7.3, 0.53848225143008519524},
    {3.1, 9.0, 0.99363877201089902267},
    {-0.7, 10.0, 0.24994378508644218108},
    {4.0, 15.0, 0.99942034157511944219},
    {1.96, 30.0, 0.97032884355197476184},
    {-2.05, 18.0, 0.027610401345635511675},
    {2.5, 100.0, 0.9929771054379614113},
    {-5.0, 3.0, 0.0076962190366511504933},
    {0.01, 0.5, 0.50269662818194775177},
    {6.0, 2.5, 0.99235913505723854968},
};

}  // namespace randcompare::reference
