# 入出力
