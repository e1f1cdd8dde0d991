"""
projlab 测试模块

- test_numerics.py: 随机流、Jacobi 特征分解、谱函数与 Gram 体积
- test_stiefel.py: Stiefel 框架与两种投影
- test_zonotope.py: 支撑函数、方向网格、Hausdorff 距离与内禀体积
- test_distributions.py: 内置分布与离散分布文件
- test_ratefn.py: Hermite 求积、Ψ、Ψ*、渐近残差
- test_empirical_ldp.py: 事件区域、测度估计与经验速率扫描
- test_experiments.py: SLLN / 内禀体积实验与报告输出
- test_cli.py: 命令行与退出码
"""
