"""設定テストパッケージ"""
