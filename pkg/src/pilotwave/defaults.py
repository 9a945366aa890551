"""
既定値定義モジュール。

ライブラリとCLIで共有する数値の既定値を定義する。
自然単位系（ħ = c = 1）を前提とし、単位変換は一切行わない。
"""

# 軌道積分
STEP = 1e-3  # 固定ステップ幅（sの自然単位）
NODE_THRESHOLD_FACTOR = 1e-9  # ノード判定 |ψ| ≤ 係数 × Σ|c_k|
MONITOR_INTERVAL = 100  # ステップ半減モニタの間隔（ステップ数、0で無効）
MONITOR_TOLERANCE = 1e-9  # ステップ半減モニタの局所誤差しきい値

# 求積
GAUSS_POINTS_1D = 64  # 1+1D の軸あたりのGauss–Legendre点数
GAUSS_POINTS_3D = 16  # それ以外の軸あたりのGauss–Legendre点数
MIN_GAUSS_POINTS = 2  # 軸あたりの最小点数
MIN_MONTE_CARLO_SAMPLES = 10  # モンテカルロの最小サンプル数
MONTE_CARLO_SAMPLES = 100_000  # モンテカルロの既定サンプル数
QUADRATURE_CHUNK = 262_144  # テンソル求積で一度に評価する点数

# サンプリング
SAMPLING_BATCH = 65_536  # 棄却サンプリング1バッチあたりの提案数
MAX_PROPOSALS = 10_000_000  # 受理率判定までの最大提案数
MIN_ACCEPTANCE_RATE = 1e-6  # これを下回ると包絡が病的とみなす

# 等変性検定
EQUIVARIANCE_COUNT = 20_000  # CLIの統計検定のアンサンブルサイズ
EQUIVARIANCE_DELTA_S = 0.5  # 流すパラメータ幅
LIOUVILLE_SAMPLES = 200  # 点ごとのLiouville検定のサンプル数
JACOBIAN_STEP = 1e-4  # フローのヤコビアンの差分幅
INTERIOR_SHRINK = 0.1  # 比較領域は各軸の幅を10%縮める
HISTOGRAM_BINS = 20  # 統計検定の軸あたりのビン数（上限）
MIN_SURVIVORS = 100  # これ未満なら判定不能
MIN_EXPECTED_COUNT = 5.0  # カイ二乗で統合するビンの期待度数
BIN_TARGET_COUNT = 20.0  # ビン数はビンあたりの平均度数がこれ以上になるように選ぶ
MAX_HISTOGRAM_CELLS = 4_194_304  # ビン数 × K² の上限（質量配列のメモリ上限）

# 検査スイート
KG_STEP = 1e-3  # KG残差の差分幅
KG_COARSE_STEP = 1e-2  # 収束次数測定の粗い差分幅
KG_TOLERANCE = 1e-5  # 正規化KG残差の許容値
KG_ORDER_RANGE = (1.8, 2.2)  # 許容される収束次数
CONTINUITY_STEP = 1e-4  # 連続の式の差分幅
CONTINUITY_TOLERANCE = 1e-6  # 正規化残差の許容値
CHECK_SAMPLES = 100  # KG・連続の式で調べる配置数
MIN_EVALUATED_FRACTION = 0.5  # 評価できた配置がこの割合未満なら判定不能
LIOUVILLE_TOLERANCE = 1e-3  # 点ごとのLiouville違反の許容値
CHI_SQUARE_SIGNIFICANCE = 0.01  # カイ二乗検定の有意水準
COVARIANCE_RAPIDITY = 0.5  # 共変性検査のラピディティ
COVARIANCE_TOLERANCE = 1e-6  # 共変性検査の許容値
LOCALITY_TOLERANCE = 1e-12  # 積状態での非局所性プローブの許容値
S_SPAN = (0.0, 5.0)  # 軌道の既定パラメータ区間

# 遷移率
RATE_POINTS_PER_PANEL = 16  # Fejér核の零点間パネルあたりの点数
RATE_RECOMMENDED_WIDTHS = 100  # 推奨半幅（2π/T の倍数）
RATE_SERIES_CUTOFF = 1e-4  # |ΔE·T| がこれ未満なら級数展開を使う

# 環境
THREADS_ENV = "PILOTWAVE_THREADS"  # 既定スレッド数の環境変数（速度のみに影響）
