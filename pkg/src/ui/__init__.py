# コマンドライン
