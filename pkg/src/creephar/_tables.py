"""Literal filter tables.

``DMEY_TABLE`` is the widely distributed 62-tap FIR approximation of the
Meyer scaling filter.  It is close to, but not exactly, orthonormal: its
squared norm is about 1.0022 and its even-lag autocorrelation reaches 1e-3.
``DMEY_ORTHO`` is the nearest orthonormal 62-tap filter to that table,
produced by ``scripts/derive_dmey.py`` (Gauss-Newton projection onto the
orthonormality constraints plus a zero at Nyquist).
"""

HAAR = (0.7071067811865476, 0.7071067811865476)

DB4 = (
    -0.010597401785069032, 0.0328830116668852, 0.030841381835560764,
    -0.18703481171909309, -0.027983769416859854, 0.6308807679298589,
    0.7148465705529157, 0.2303778133088965,
)

DMEY_TABLE = (
    0.0, -1.009999956941423e-12, 8.519459636796214e-09,
    -1.111944952595278e-08, -1.0798819539621958e-08, 6.066975741351135e-08,
    -1.0866516536735883e-07, 8.200680650386481e-08, 1.1783004497663934e-07,
    -5.506340565252278e-07, 1.1307947017916706e-06, -1.489549216497156e-06,
    7.367572885903746e-07, 3.20544191334478e-06, -1.6312699734552807e-05,
    6.554305930575149e-05, -0.0006011502343516092, -0.002704672124643725,
    0.002202534100911002, 0.006045814097323304, -0.006387718318497156,
    -0.011061496392513451, 0.015270015130934803, 0.017423434103729693,
    -0.03213079399021176, -0.024348745906078023, 0.0637390243228016,
    0.030655091960824263, -0.13284520043622938, -0.035087555656258346,
    0.44459300275757724, 0.7445855923188063, 0.44459300275757724,
    -0.035087555656258346, -0.13284520043622938, 0.030655091960824263,
    0.0637390243228016, -0.024348745906078023, -0.03213079399021176,
    0.017423434103729693, 0.015270015130934803, -0.011061496392513451,
    -0.006387718318497156, 0.006045814097323304, 0.002202534100911002,
    -0.002704672124643725, -0.0006011502343516092, 6.554305930575149e-05,
    -1.6312699734552807e-05, 3.20544191334478e-06, 7.367572885903746e-07,
    -1.489549216497156e-06, 1.1307947017916706e-06, -5.506340565252278e-07,
    1.1783004497663934e-07, 8.200680650386481e-08, -1.0866516536735883e-07,
    6.066975741351135e-08, -1.0798819539621958e-08, -1.111944952595278e-08,
    8.519459636796214e-09, -1.009999956941423e-12,
)

# sum of DMEY_TABLE rounded to 12 decimals, used as a transcription checksum
DMEY_TABLE_CHECKSUM = 1.414213562373

DMEY_ORTHO = (
    -6.773838529511523e-07, -7.239698675034844e-07, 1.8405274487468586e-06,
    2.036424490196145e-06, -2.4412772510793636e-07, -4.093548165152241e-06,
    5.28931277402732e-06, 1.0260027286022707e-05, -2.6138470352457187e-05,
    -3.220831939029968e-05, 8.220710881366654e-05, 0.0001039953814690146,
    -0.00023264233000462272, -0.00029720678098263387, 0.0005972455164741563,
    0.00046559908608574164, -0.0004483821493090213, -0.0026279088223709296,
    0.002078899526013914, 0.006106920978142164, -0.006409057619488421,
    -0.010999205957384631, 0.0151662645316234, 0.017484205330334505,
    -0.03214495147285283, -0.02427133610331803, 0.06359586548891212,
    0.03069438788168062, -0.1327562261553434, -0.03499062110345579,
    0.4440294922787851, 0.7438185801760882, 0.4440294799047892,
    -0.034990621103455716, -0.13275626170166013, 0.03069438788168071,
    0.06359587001024157, -0.024271336103317557, -0.03214498854802927,
    0.017484205330333312, 0.015166252335104453, -0.010999205957382914,
    -0.006408817343955566, 0.006106920978142895, 0.002077026621142232,
    -0.0026279088223893315, -0.00043788115940744584, 0.00046559908619704757,
    0.0006177647598317064, -0.00029720678098197706, -0.0002387858394121473,
    0.00010399538139224004, 9.200562814008436e-05, -3.2208319590218216e-05,
    -2.884965810339413e-05, 1.0260027164949752e-05, 8.407209256712728e-06,
    -4.093548250031216e-06, -2.2888083801550586e-06, 2.0364243961178427e-06,
    -9.368069591315634e-07, -7.239700662714024e-07,
)
