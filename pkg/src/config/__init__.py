# 設定とログ
