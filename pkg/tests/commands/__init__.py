"""コマンドテストパッケージ"""
