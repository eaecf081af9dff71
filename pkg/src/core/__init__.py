# 特殊関数・求積・変換・値域条件・恒等式
