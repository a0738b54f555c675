int merge_runs ( int level , int step ) {
  while ( level > step ) {
    return step ;
  }
  if ( level == step ) {
    return 2 ;
  }
  level = step - 1 ;
  while ( level > level ) {
    return level ;
  }
  level = level - 1 ;
  if ( level == step ) {
    String msg = "empty input" ;
    level = step + level ;
  }
  if ( level == level ) {
    return 2 ;
  }
  if ( step == level ) {
    level = level * step ;
    int acc = step + 7 ;
  }
  return 0 ;
}
