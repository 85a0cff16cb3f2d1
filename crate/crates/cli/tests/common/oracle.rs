//! Reference values computed at 50 significant digits.

pub const BEAM_WIDTH: [(f64, f64, f64); 20] = [
    (1947.8653606090631, 5.325467236519927, 10.373706866113624),
    (0.9106371459956542, 0.5182844458456293, 0.95194904685749592),
    (0.019097040631431025, 1.0037495658441984, 0.49153727259158027),
    (2127.2582270561393, 1.0090713013343866, 2.2015373072073897),
    (1588.6657591184837, 10.123801961149645, 16.083411363951637),
    (489.18777471952114, 10.947708942457005, 5.3556749943101144),
    (7927.707113201934, 0.548812755279646, 4.4427341835468284),
    (0.015566648979370927, 1.0289609286331676, 0.47949373987945557),
    (15.406858855321426, 10.308481824101934, 0.16587629378786534),
    (42506.149677261754, 10.571204391411793, 449.3411985541417),
    (411.7192628177194, 10.712110765746154, 4.4106228368319116),
    (5298.005849831164, 1.049641449511349, 5.5808366288212674),
    (4282.776917008208, 3.139680559751902, 13.447469627438112),
    (2723.164711889133, 1.0794379481522491, 2.9748109377217011),
    (71193.18522336976, 0.5287211855129336, 37.65291036481964),
    (4485.349078665767, 3.218833586831765, 14.438405898026611),
    (804.4795095182018, 0.5059032889127482, 1.0567617058637661),
    (1747.44315546536, 3.045595360398152, 5.3244697470027447),
    (2843.3967089534885, 20.155240964361592, 57.309351054189551),
    (4719.077820832152, 3.1020367086573586, 14.639616649452889),
];

pub const GEOMETRIC: [(f64, f64, bool, f64); 20] = [
    (3242.9623463812727, 10.06876294940686, false, 31.70651157410125),
    (736.1702737769845, 10.697042067826928, true, 13.43151696380548),
    (515.1673568993049, 5.323564427263834, false, 10.400624160656261),
    (41122.71957769468, 10.887040292238092, true, 48.425939536446608),
    (2528.2036600694855, 10.355464109540346, false, 29.78860267278067),
    (623.4232486392453, 3.2304698965417566, true, 2.9551893628496006),
    (1095.3453518379179, 10.390949703133227, false, 22.56294014449803),
    (37450.46342160249, 10.401644256334304, true, 47.217300252197974),
    (2450.8762524752856, 10.863984469698515, false, 29.935103164923145),
    (2300.4372030720265, 5.341361529693725, true, 17.236920641495926),
    (7394.328009909978, 3.0248954083983994, false, 28.422212058013806),
    (892.7827467278142, 3.0036189179531396, true, 4.8278221181513572),
    (905.0986477194151, 1.014567639245798, false, 3.1276653039121013),
    (3262.265544071246, 5.476548962762547, true, 20.466288696909202),
    (491.328744440575, 10.39806963055565, false, 15.653306084121663),
    (5258.8427342758105, 10.062247821618689, true, 29.880015963452907),
    (746.1669001891523, 10.162303187772096, false, 19.050577471248654),
    (3250.9090756306014, 1.0000233281901356, true, 6.310830929296499),
    (1014.6474751873743, 5.306868631487715, false, 16.10483596842774),
    (718.583094343455, 10.148550485330892, true, 12.780946418565904),
];

pub const ATMOSPHERIC: [(f64, f64, f64); 20] = [
    (23.425715, 2.0633, 5.1899117132416297),
    (33.37413, 1.0528, 1.9138208498151086),
    (76.470493, 4.969, 5.110827673648501),
    (42.426463, 2.6773, 3.9684669942682074),
    (8.635146, 0.9598, 6.3926221566862691),
    (31.460326, 1.6914, 3.2408008390333322),
    (74.685243, 1.2265, 1.2716572828581477),
    (3.05321, 4.7794, 89.731493705322795),
    (47.962082, 1.1597, 1.5614610648508704),
    (49.288029, 0.6217, 0.82018677999852981),
    (47.948929, 4.9033, 6.6033433070521187),
    (77.749595, 3.6329, 3.7175500775923161),
    (24.213141, 2.1501, 5.2424556981261992),
    (15.850037, 3.9737, 14.549257964417289),
    (48.347464, 4.0057, 5.3610264253237224),
    (30.307218, 1.5037, 2.9797692638682964),
    (73.14335, 4.9322, 5.1536349145026075),
    (76.7987, 4.1274, 4.2394324218373808),
    (73.749799, 3.8294, 3.9887552695064712),
    (21.157141, 2.8294, 7.8392570036145908),
];

pub const CLOUD: [(u8, f64); 20] = [
    (1, 0.029049906434072038),
    (2, 0.058295436607238548),
    (5, 0.1472325682070635),
    (10, 0.29963223377443216),
    (17, 0.5223961808859545),
    (25, 0.79181246047624828),
    (33, 1.079053973095196),
    (42, 1.4266750356873154),
    (50, 1.7609125905568124),
    (64, 2.4159280781211352),
    (75, 3.010299956639812),
    (88, 3.8369956955742737),
    (99, 4.6852108295774488),
    (100, 4.7712125471966244),
    (111, 5.8502665202918204),
    (120, 6.989700043360188),
    (130, 8.7506126339170005),
    (140, 11.760912590556812),
    (147, 16.989700043360188),
    (149, 21.760912590556812),
];

pub const GAIN_QBER: [(f64, f64, f64); 20] = [
    (0.89125093813374553, 0.35957941440684014, 0.015004046394041773),
    (0.63095734448019325, 0.27056337181231663, 0.015005377668049648),
    (0.39810717055349725, 0.18049702129831858, 0.015008061074856162),
    (0.25118864315095801, 0.11803042853882074, 0.015012327329638742),
    (0.15848931924611135, 0.0761891231610277, 0.015019097214138097),
    (0.1, 0.048773575499285991, 0.015029831727223306),
    (0.063095734448019325, 0.031058425343343431, 0.015046847191508112),
    (0.039810717055349725, 0.019711554857669492, 0.015073814572747105),
    (0.025118864315095801, 0.012483891641430941, 0.015116550194586055),
    (0.015848931924611135, 0.0078961501568538276, 0.01518426701254371),
    (0.01, 0.0049905208073176866, 0.015291552736914053),
    (0.0063095734448019325, 0.0031528156117410566, 0.015461492259357507),
    (0.0039810717055349725, 0.0019915560501175008, 0.015730584509491538),
    (0.0025118864315095801, 0.0012581548491566239, 0.016156455424366346),
    (0.0015848931924611135, 0.00079513269334918333, 0.016829883253663468),
    (0.001, 0.00050287502083072943, 0.017893363041966965),
    (0.00063095734448019325, 0.00031842891407646146, 0.019569308676694554),
    (0.00039810717055349725, 0.00020203377542627192, 0.022201766125144617),
    (0.00025118864315095801, 0.00012858643493884872, 0.026315345982583217),
    (0.00015848931924611135, 8.2241519847953638e-5, 0.032691793666872559),
];

pub const DECOY: [(f64, f64, f64); 20] = [
    (0.89125093813374553, 0.88352160103631424, 0.015822515759194089),
    (0.63095734448019325, 0.6235729967102957, 0.016036168032464558),
    (0.39810717055349725, 0.39195787751052763, 0.01624816987102187),
    (0.25118864315095801, 0.24657846799624878, 0.016394236074750194),
    (0.15848931924611135, 0.15525354785502399, 0.016493312623524394),
    (0.1, 0.097819212338979319, 0.016561264100089608),
    (0.063095734448019325, 0.06166252486075511, 0.016610417661169004),
    (0.039810717055349725, 0.038883666852775324, 0.016650413019102269),
    (0.025118864315095801, 0.024525375783850961, 0.016689485981414592),
    (0.015848931924611135, 0.015471678865832352, 0.016735907134282525),
    (0.01, 0.0097615107745059991, 0.01679962421426666),
    (0.0063095734448019325, 0.0061595729540684827, 0.016894345032782969),
    (0.0039810717055349725, 0.0038872778707073196, 0.017040455264901016),
    (0.0025118864315095801, 0.0024537059942569702, 0.017269364441388653),
    (0.0015848931924611135, 0.0015492428879241795, 0.017630169310403397),
    (0.001, 0.00097858900537426147, 0.018199967996074047),
    (0.00063095734448019325, 0.00061854021268332195, 0.019099797386410054),
    (0.00039810717055349725, 0.0003913685528575562, 0.02051900871658186),
    (0.00025118864315095801, 0.00024803442710280259, 0.022751811934756664),
    (0.00015848931924611135, 0.0001575973056120569, 0.026250180007216215),
];

pub const GLLP: [(f64, f64); 20] = [
    (0.89125093813374553, 18963637.734156387),
    (0.63095734448019325, 13141150.238441794),
    (0.39810717055349725, 8108844.4325952725),
    (0.25118864315095801, 5035989.2174368299),
    (0.15848931924611135, 3143267.965181194),
    (0.1, 1968852.4390683752),
    (0.063095734448019325, 1236113.8713231993),
    (0.039810717055349725, 777176.85319850901),
    (0.025118864315095801, 488981.960458952),
    (0.015848931924611135, 307697.2518146981),
    (0.01, 193536.93313717015),
    (0.0063095734448019325, 121596.36536656233),
    (0.0039810717055349725, 76241.849566865657),
    (0.0025118864315095801, 47641.500277175836),
    (0.0015848931924611135, 29605.040736631433),
    (0.001, 18232.365397533428),
    (0.00063095734448019325, 11065.472867671019),
    (0.00039810717055349725, 6555.1729091585424),
    (0.00025118864315095801, 3725.1951013406283),
    (0.00015848931924611135, 1960.3038173199169),
];

pub const KL: [([f64; 3], [f64; 3], f64); 20] = [
    ([3.56207, 0.299512, 0.289091], [2.801391, 2.599152, 6.928294], 0.91765853013276798),
    ([9.565586, 4.477805, 9.370842], [9.8805, 9.550456, 3.652712], 0.2047505891224207),
    ([2.212419, 2.27619, 1.975095], [2.05169, 6.244423, 9.00408], 0.1913828577791186),
    ([8.405951, 4.79994, 6.533251], [7.998441, 0.856937, 6.609251], 0.1922639726670472),
    ([9.098674, 7.825206, 7.503903], [4.785547, 1.793432, 7.893463], 0.172233517824402),
    ([3.331847, 8.010227, 9.716856], [3.964427, 4.019854, 9.468502], 0.058874151149659064),
    ([7.250739, 1.708337, 1.279113], [1.519995, 9.049472, 8.066955], 1.1972225487474343),
    ([1.470281, 8.26684, 9.803256], [6.57611, 3.510571, 5.491114], 0.31376609178553814),
    ([1.318529, 0.152287, 9.709193], [6.50025, 5.270545, 9.336912], 0.43304256376021814),
    ([4.343756, 8.718712, 8.263291], [2.118313, 2.52583, 2.936737], 0.019347140438826916),
    ([2.412989, 5.868507, 2.601054], [4.195935, 1.319426, 9.10107], 0.67774879659497899),
    ([3.544302, 4.587028, 5.837654], [9.043925, 4.212076, 9.178034], 0.074969860528304794),
    ([5.021473, 5.322931, 5.239831], [0.196862, 4.406848, 1.839248], 0.5768887800774688),
    ([0.049285, 7.993713, 1.731744], [4.740194, 7.254681, 5.569191], 0.4354126563095115),
    ([3.266562, 5.188304, 5.558864], [7.844882, 1.070033, 5.607358], 0.41246720234921158),
    ([2.492458, 2.776402, 7.724888], [5.082063, 5.621677, 7.602331], 0.064870266479969762),
    ([9.125755, 4.438051, 6.129154], [5.060476, 5.126493, 6.930383], 0.062335186223223997),
    ([4.528934, 5.337522, 4.785583], [9.415596, 6.995187, 8.766589], 0.018904028405512824),
    ([9.422384, 2.603327, 5.599543], [9.433238, 8.401598, 1.379973], 0.35765523338416925),
    ([1.225003, 4.42676, 0.734736], [2.413981, 0.740476, 6.698027], 1.2885993960746998),
];
